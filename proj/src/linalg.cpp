#include "contractivity/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace contractivity {

PExponent::PExponent(double p) : p_(p), infinite_(false) {
  if (!std::isfinite(p) || !(p >= 1.0)) {
    std::ostringstream os;
    os << "Schatten exponent must satisfy p >= 1 (got " << p << ")";
    throw std::invalid_argument(os.str());
  }
}

PExponent PExponent::parse(std::string_view text) {
  if (text == "inf" || text == "Inf" || text == "infinity" || text == "INF") {
    return infinity();
  }
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse p value '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("cannot parse p value '" + s + "'");
  if (std::isinf(v)) return infinity();
  return PExponent(v);
}

double PExponent::value() const {
  if (infinite_) throw std::logic_error("PExponent::value() called on p = inf");
  return p_;
}

PExponent PExponent::conjugate() const {
  if (infinite_) return PExponent(1.0);
  if (p_ == 1.0) return infinity();
  return PExponent(p_ / (p_ - 1.0));
}

std::string PExponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p_;
  return os.str();
}

SampleKind parse_sample_kind(std::string_view name) {
  if (name == "ginibre") return SampleKind::ginibre;
  if (name == "haar_unitary") return SampleKind::haar_unitary;
  if (name == "pure_state") return SampleKind::pure_state;
  if (name == "hermitian") return SampleKind::hermitian;
  if (name == "traceless_hermitian") return SampleKind::traceless_hermitian;
  throw std::invalid_argument("unknown sample kind '" + std::string(name) + "'");
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double dev = max_abs(a - a.adjoint());
  return dev <= rel_tol * (1.0 + max_abs(a));
}

ComplexMatrix symmetrized(const ComplexMatrix& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + " must be square");
  }
  if (!is_hermitian(a)) {
    throw std::invalid_argument(std::string(what) + " is not Hermitian within tolerance");
  }
  return (a + a.adjoint()) * 0.5;
}

HermitianSpectrum hermitian_eigensystem(const ComplexMatrix& a) {
  const ComplexMatrix h = symmetrized(a, "hermitian_eigensystem input");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  // Eigen returns ascending order.
  HermitianSpectrum out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

RealVector singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

double schatten_norm_of_values(const RealVector& sigma, PExponent p) {
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.cwiseAbs().maxCoeff();
  if (p.is_infinite() || top == 0.0) return top;
  const double pv = p.value();
  if (pv == 1.0) return sigma.cwiseAbs().sum();
  // Scale by the largest value to avoid overflow for large p.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) acc += std::pow(std::abs(sigma[i]) / top, pv);
  return top * std::pow(acc, 1.0 / pv);
}

double schatten_norm(const ComplexMatrix& a, PExponent p) {
  return schatten_norm_of_values(singular_values(a), p);
}

std::pair<ComplexMatrix, ComplexMatrix> positive_part_decomposition(const ComplexMatrix& a) {
  const auto spec = hermitian_eigensystem(a);
  const auto& v = spec.eigenvectors;
  const RealVector plus = spec.eigenvalues.cwiseMax(0.0);
  const RealVector minus = (-spec.eigenvalues).cwiseMax(0.0);
  ComplexMatrix a_plus = v * plus.cast<Complex>().asDiagonal() * v.adjoint();
  ComplexMatrix a_minus = v * minus.cast<Complex>().asDiagonal() * v.adjoint();
  return {(a_plus + a_plus.adjoint()) * 0.5, (a_minus + a_minus.adjoint()) * 0.5};
}

ComplexMatrix traceless_project(const ComplexMatrix& a) {
  ComplexMatrix h = symmetrized(a, "traceless_project input");
  const Complex shift = h.trace() / static_cast<double>(h.rows());
  h.diagonal().array() -= shift;
  return h;
}

Rng::Rng(std::uint64_t seed) : Rng(seed, 0) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  engine_.seed(seq);
}

double Rng::normal() { return normal_(engine_); }
double Rng::uniform() { return uniform_(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::sqrt(0.5);
}

ComplexMatrix Rng::ginibre(int rows, int cols) {
  ComplexMatrix g(rows, cols);
  // Fill in row-major order so results do not depend on storage layout.
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = complex_normal();
  return g;
}

ComplexVector Rng::unit_vector(int n) {
  ComplexVector v(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) v[i] = complex_normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

std::uint64_t Rng::next_seed() { return engine_(); }

ComplexMatrix haar_unitary(int n, Rng& rng) {
  const ComplexMatrix g = rng.ginibre(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag == 0.0) ? Complex(1.0) : d / mag;
  }
  return q;
}

ComplexMatrix sample(SampleKind kind, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample dimension must be >= 1");
  Rng rng(seed);
  switch (kind) {
    case SampleKind::ginibre:
      return rng.ginibre(n, n);
    case SampleKind::haar_unitary:
      return haar_unitary(n, rng);
    case SampleKind::pure_state: {
      const ComplexVector psi = rng.unit_vector(n);
      return psi * psi.adjoint();
    }
    case SampleKind::hermitian: {
      const ComplexMatrix g = rng.ginibre(n, n);
      return (g + g.adjoint()) * 0.5;
    }
    case SampleKind::traceless_hermitian: {
      const ComplexMatrix g = rng.ginibre(n, n);
      ComplexMatrix h = (g + g.adjoint()) * 0.5;
      const double shift = h.trace().real() / n;
      h.diagonal().array() -= shift;
      return h;
    }
  }
  throw std::invalid_argument("unknown sample kind");
}

}  // namespace contractivity
