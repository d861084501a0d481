#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contractivity/channel.hpp"
#include "contractivity/linalg.hpp"

namespace contractivity {

enum class NormDomain { all, hermitian, traceless_hermitian, traceless_all };

NormDomain parse_domain(std::string_view name);
std::string to_string(NormDomain domain);
bool is_traceless(NormDomain domain) noexcept;
bool is_hermitian_domain(NormDomain domain) noexcept;

/// Orthogonal (Frobenius) projection onto the real subspace of M_n.
ComplexMatrix project_to_domain(const ComplexMatrix& a, NormDomain domain);

/// Frobenius-orthonormal real basis of the domain.
std::vector<ComplexMatrix> domain_basis(int n, NormDomain domain);

struct EstimatorConfig {
  int restarts = 32;
  int max_iters = 2000;
  double tol = 1e-9;
  std::uint64_t seed = 42;
};

/// Certified upper bound on an induced norm, or no certificate at all.
struct UpperBound {
  std::optional<double> value;
  std::string source;  // which certificate produced `value`

  bool certified() const noexcept { return value.has_value(); }
};

struct NormEstimate {
  double lower = 0.0;
  ComplexMatrix witness;
  UpperBound upper;
  std::string method;
  bool converged = false;
  int iterations = 0;
};

/// Facts about a map that the certificates depend on. Computed once and
/// reused across estimates of the same map.
struct MapFacts {
  bool positive = false;         // completely positive, or positive on sampled states
  bool trace_preserving = false;
  bool hermiticity_preserving = false;
  double norm_1_1 = 0.0;         // max over rank-one inputs
  double norm_inf_inf = 0.0;     // Russo-Dye for positive maps, else duality
};

MapFacts analyze_map(const SuperOp& t, std::uint64_t seed = 1);

// Closed forms.
double theorem1_bound(int n, PExponent p);
double h01_bound(int n, PExponent p);
double saturation_ratio(int n, int d, PExponent p);
/// d = n/2 for even n, (n+1)/2 for odd n.
int optimal_saturation_dim(int n);
/// A = P - d/(n-d) (1 - P), P the projector onto the first d basis vectors.
ComplexMatrix saturating_witness(int n, int d);

struct RussoDyeValue {
  double value = 0.0;
  bool positivity_verified = false;
};

/// ||T(1)||_inf; exact for positive maps. The flag records whether sampled
/// positivity (or complete positivity) was confirmed.
RussoDyeValue russo_dye_inf_norm(const SuperOp& t);

/// max over unit psi, phi of ||T(|psi><phi|)||_1, by multi-start alternating
/// ascent on the product of unit spheres.
double norm_1_rank_one(const SuperOp& t, int restarts = 8, std::uint64_t seed = 7);

/// Largest singular value of the natural representation.
double exact_norm_p2(const SuperOp& t);

double riesz_thorin_bound(const SuperOp& t, PExponent p);
double riesz_thorin_bound(const MapFacts& facts, PExponent p);

/// Multi-restart dual fixed-point ascent over the unit p-sphere of the domain.
/// Throws std::invalid_argument for Hermitian domains on maps that do not
/// preserve Hermiticity.
NormEstimate estimate_norm(const SuperOp& t, PExponent p, NormDomain domain,
                           const EstimatorConfig& cfg = {});
NormEstimate estimate_norm(const SuperOp& t, PExponent p, NormDomain domain,
                           const EstimatorConfig& cfg, const MapFacts& facts);

/// ||T(A)||_p / ||A||_p.
double norm_ratio(const SuperOp& t, const ComplexMatrix& a, PExponent p);

/// Independent lower bound: random sampling of the domain sphere followed by
/// pattern search on the real coordinates. `budget` counts map evaluations.
double brute_force_norm(const SuperOp& t, PExponent p, NormDomain domain, int budget,
                        std::uint64_t seed = 3);

/// Maximum of r^{p-1} sum lambda^p + s^{p-1} sum mu^p under the norm and
/// trace constraints, searched over the stationary branches (flat spectra,
/// or r = s). Rejects p = 1 and p = inf.
double h01_spectrum_oracle(int n, PExponent p);

}  // namespace contractivity
