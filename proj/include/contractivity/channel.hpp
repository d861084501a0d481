#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "contractivity/linalg.hpp"

namespace contractivity {

/// Kraus operators K_i of shape dim_out x dim_in, T(A) = sum_i K_i A K_i^*.
struct KrausSet {
  std::vector<ComplexMatrix> operators;
};

/// Choi matrix sum_ij |i><j| (x) T(|i><j|), input factor first.
struct ChoiMatrix {
  ComplexMatrix matrix;
};

/// Linear map M_n -> M_r. The natural representation is the r^2 x n^2 matrix
/// acting on column-stacked inputs and is always present; Kraus and Choi forms
/// are optional attachments that agree with it.
class SuperOp {
 public:
  SuperOp(int dim_in, int dim_out, ComplexMatrix natural, std::string label = {});

  static SuperOp from_kraus(KrausSet kraus, std::string label = {});
  static SuperOp from_choi(int dim_in, int dim_out, ChoiMatrix choi, std::string label = {});

  int dim_in() const noexcept { return dim_in_; }
  int dim_out() const noexcept { return dim_out_; }
  const ComplexMatrix& natural() const noexcept { return natural_; }
  const std::optional<KrausSet>& kraus() const noexcept { return kraus_; }
  const std::optional<ChoiMatrix>& choi() const noexcept { return choi_; }
  const std::string& label() const noexcept { return label_; }

  SuperOp with_label(std::string label) const;
  SuperOp with_kraus(KrausSet kraus) const;
  SuperOp with_choi(ChoiMatrix choi) const;

  /// T(A); throws std::invalid_argument on shape mismatch.
  ComplexMatrix apply(const ComplexMatrix& a) const;

 private:
  int dim_in_;
  int dim_out_;
  ComplexMatrix natural_;
  std::optional<KrausSet> kraus_;
  std::optional<ChoiMatrix> choi_;
  std::string label_;
};

ComplexMatrix apply(const SuperOp& t, const ComplexMatrix& a);

/// Hilbert-Schmidt adjoint: tr(B^* T(A)) = tr(T^*(B)^* A).
SuperOp adjoint(const SuperOp& t);

/// S o T; requires dim_out(T) == dim_in(S).
SuperOp compose(const SuperOp& s, const SuperOp& t);

enum class Representation { kraus, choi, natural };

Representation parse_representation(const std::string& name);

/// Kraus rank cutoff on Choi eigenvalues.
inline constexpr double kKrausCutoff = 1e-10;

/// Attaches the requested representation. Kraus extraction throws
/// std::domain_error when the Choi matrix has an eigenvalue below -1e-10.
SuperOp convert(const SuperOp& t, Representation target);

ChoiMatrix choi_of(const SuperOp& t);
ComplexMatrix natural_from_kraus(const KrausSet& kraus);
ComplexMatrix natural_from_choi(int dim_in, int dim_out, const ComplexMatrix& choi);

/// Largest deviation between the attached representations and natural_rep
/// over the matrix-unit basis of M_n.
double representation_mismatch(const SuperOp& t);

struct ChannelProps {
  bool trace_preserving = false;
  bool unital = false;
  bool completely_positive = false;
  bool positive_sampled = false;
  int positivity_samples = 0;
  /// Most negative smallest eigenvalue seen over sampled pure states (or
  /// non-Hermiticity of the output, whichever is worse), as a violation >= 0.
  double worst_positivity_violation = 0.0;
  double choi_min_eigenvalue = 0.0;
};

inline constexpr double kPropTol = 1e-10;
inline constexpr double kPositivityTol = 1e-8;

ChannelProps check_props(const SuperOp& t, int samples = 500, std::uint64_t seed = 1);

/// Smallest eigenvalue of T(|psi><psi|) minimized over pure states: sampled
/// starts plus an alternating refinement of the worst case.
double min_output_eigenvalue(const SuperOp& t, int samples, std::uint64_t seed);

bool is_hermiticity_preserving(const SuperOp& t, double tol = 1e-10);

// Generators.
SuperOp make_identity(int n);
SuperOp make_trace_channel(int n);
SuperOp make_projector_measurement(int n, int d);
SuperOp make_qutrit_counterexample();
SuperOp make_depolarizing(int n, double mu);
SuperOp make_transpose(int n);
SuperOp make_unitary_channel(const ComplexMatrix& u);
SuperOp make_random_cptp(int n, int r, int env_dim, std::uint64_t seed);
SuperOp make_unitary_mixture(const std::vector<double>& probabilities,
                             const std::vector<ComplexMatrix>& unitaries);
/// Random mixture of `terms` Haar unitaries with Dirichlet-like weights.
SuperOp make_random_unitary_mixture(int n, int terms, std::uint64_t seed);

/// T^C(rho)_ij = tr(K_i rho K_j^*); requires a Kraus representation.
SuperOp complementary_channel(const SuperOp& t);

struct UnitalSplit {
  ComplexMatrix offset;  // N = (T(1) - 1) / n, traceless
  SuperOp unital_part;   // T1, unital and trace preserving
};

/// T(A) = N tr(A) + T1(A) for a square trace-preserving map.
UnitalSplit split_unital_part(const SuperOp& t);

}  // namespace contractivity
