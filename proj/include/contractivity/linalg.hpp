#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace contractivity {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Relative tolerance used by every Hermiticity check in the toolkit.
inline constexpr double kHermitianTol = 1e-12;

/// Schatten exponent p in [1, inf]. Infinity is a distinct state, never a
/// large float.
class PExponent {
 public:
  /// Throws std::invalid_argument for p < 1 or non-finite p.
  explicit PExponent(double p);
  static PExponent infinity() noexcept { return PExponent(); }

  /// Accepts decimal literals and the tokens "inf" / "infinity".
  static PExponent parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; throws std::logic_error when infinite.
  double value() const;
  /// Hölder conjugate q with 1/p + 1/q = 1.
  PExponent conjugate() const;
  /// 1/p, with 1/inf = 0.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / p_; }

  std::string to_string() const;

  friend bool operator==(const PExponent& a, const PExponent& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }

 private:
  PExponent() noexcept : p_(0.0), infinite_(true) {}
  double p_;
  bool infinite_;
};

struct HermitianSpectrum {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors;  // columns, unitary
};

enum class SampleKind { ginibre, haar_unitary, pure_state, hermitian, traceless_hermitian };

SampleKind parse_sample_kind(std::string_view name);

bool is_hermitian(const ComplexMatrix& a, double rel_tol = kHermitianTol);

/// Checks Hermiticity within kHermitianTol and returns (A + A*)/2.
/// Throws std::invalid_argument on non-square or non-Hermitian input.
ComplexMatrix symmetrized(const ComplexMatrix& a, std::string_view what = "matrix");

HermitianSpectrum hermitian_eigensystem(const ComplexMatrix& a);

/// Descending singular values.
RealVector singular_values(const ComplexMatrix& a);

double schatten_norm_of_values(const RealVector& sigma, PExponent p);
double schatten_norm(const ComplexMatrix& a, PExponent p);

/// A = A_plus - A_minus with both parts PSD and A_plus * A_minus = 0.
std::pair<ComplexMatrix, ComplexMatrix> positive_part_decomposition(const ComplexMatrix& a);

/// A - (tr A / n) 1 for Hermitian A.
ComplexMatrix traceless_project(const ComplexMatrix& a);

ComplexMatrix sample(SampleKind kind, int n, std::uint64_t seed);

/// Deterministic generator shared by every sampler in the toolkit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);
  double normal();
  double uniform();  // [0, 1)
  Complex complex_normal();  // E|z|^2 = 1
  ComplexMatrix ginibre(int rows, int cols);
  ComplexVector unit_vector(int n);
  std::uint64_t next_seed();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

ComplexMatrix haar_unitary(int n, Rng& rng);

inline double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace contractivity
