#include "contractivity/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace contractivity {

const std::array<ComplexMatrix, 3>& pauli_matrices() {
  static const std::array<ComplexMatrix, 3> paulis = [] {
    const Complex i(0.0, 1.0);
    ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    y << 0.0, -i, i, 0.0;
    z << 1.0, 0.0, 0.0, -1.0;
    return std::array<ComplexMatrix, 3>{x, y, z};
  }();
  return paulis;
}

BlochRep bloch_of(const SuperOp& t) {
  if (t.dim_in() != 2 || t.dim_out() != 2) {
    throw std::invalid_argument("Bloch representation needs a qubit map M_2 -> M_2");
  }
  if (!is_hermiticity_preserving(t)) {
    throw std::invalid_argument("Bloch representation needs a Hermiticity-preserving map");
  }
  const auto& s = pauli_matrices();
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix t_id = t.apply(id);
  if (std::abs(t_id.trace() - Complex(2.0)) > 1e-10) {
    throw std::invalid_argument("Bloch representation needs a trace-preserving map");
  }
  BlochRep b;
  for (int k = 0; k < 3; ++k) {
    const ComplexMatrix img = t.apply(s[k]);
    if (std::abs(img.trace()) > 1e-10) {
      throw std::invalid_argument("Bloch representation needs a trace-preserving map");
    }
    b.r[k] = 0.5 * (s[k] * t_id).trace().real();
    for (int j = 0; j < 3; ++j) b.R(j, k) = 0.5 * (s[j] * img).trace().real();
  }
  return b;
}

SuperOp channel_of(const BlochRep& b) {
  const auto& s = pauli_matrices();
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  ComplexMatrix image_of_id = id;
  std::array<ComplexMatrix, 3> image_of_pauli;
  for (int k = 0; k < 3; ++k) {
    image_of_id += b.r[k] * s[k];
    image_of_pauli[k] = ComplexMatrix::Zero(2, 2);
    for (int j = 0; j < 3; ++j) image_of_pauli[k] += b.R(j, k) * s[j];
  }
  // A = (tr(A) 1 + sum_k tr(sigma_k A) sigma_k) / 2.
  ComplexMatrix nat(4, 4);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(2, 2);
      e(i, j) = 1.0;
      ComplexMatrix out = e.trace() * image_of_id;
      for (int k = 0; k < 3; ++k) out += (s[k] * e).trace() * image_of_pauli[k];
      out *= 0.5;
      nat.col(i + 2 * j) = Eigen::Map<const ComplexVector>(out.data(), 4);
    }
  return SuperOp(2, 2, nat, "bloch");
}

double bloch_max_image_radius(const BlochRep& b, int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
  auto radius = [&](const Eigen::Vector3d& w) { return (b.r + b.R * w).norm(); };

  // Fibonacci lattice on the sphere.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = -1.0;
  Eigen::Vector3d best_w = Eigen::Vector3d::UnitZ();
  for (int k = 0; k < grid_points; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / grid_points;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Eigen::Vector3d w(rho * std::cos(golden * k), rho * std::sin(golden * k), z);
    const double v = radius(w);
    if (v > best) {
      best = v;
      best_w = w;
    }
  }
  // ||r + R w||^2 is convex, so w <- normalize(R^T (r + R w)) never decreases it.
  Eigen::Vector3d w = best_w;
  for (int it = 0; it < 500; ++it) {
    const Eigen::Vector3d g = b.R.transpose() * (b.r + b.R * w);
    const double gn = g.norm();
    if (gn == 0.0) break;
    const Eigen::Vector3d next = g / gn;
    const double v = radius(next);
    if (v <= best * (1.0 + 1e-15)) {
      best = std::max(best, v);
      break;
    }
    best = v;
    w = next;
  }
  return best;
}

bool bloch_is_positive(const BlochRep& b, double tol) {
  return bloch_max_image_radius(b) <= 1.0 + tol;
}

BlochRep random_positive_tp_bloch(std::uint64_t seed) {
  Rng rng(seed, 0x626c6f63);
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
  const double top = Eigen::JacobiSVD<Eigen::Matrix3d>(g).singularValues()[0];
  const double sigma = rng.uniform();
  Eigen::Vector3d dir(rng.normal(), rng.normal(), rng.normal());
  if (dir.norm() == 0.0) dir = Eigen::Vector3d::UnitX();
  const double len = (1.0 - sigma) * rng.uniform();
  BlochRep b;
  b.R = (top > 0.0) ? Eigen::Matrix3d(g * (sigma / top)) : Eigen::Matrix3d::Zero();
  b.r = dir.normalized() * len;
  return b;
}

SuperOp random_positive_tp_qubit(std::uint64_t seed) {
  return channel_of(random_positive_tp_bloch(seed))
      .with_label("random_positive_tp_qubit(seed=" + std::to_string(seed) + ")");
}

}  // namespace contractivity
