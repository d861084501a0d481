#pragma once

#include <cstdint>
#include <vector>

#include "contractivity/linalg.hpp"
#include "contractivity/norms.hpp"
#include "contractivity/report.hpp"

namespace contractivity {

/// {1, 1.5, 2, 3, inf}
std::vector<PExponent> default_p_grid();

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kDefaultSamples = 20;

/// Ratio ||T(A)||_inf / ||A||_inf for A = diag(1, w, w^2), w = exp(2 pi i / 3),
/// from a hand evaluation of the singular values of T(A) = diag(1 + w, w^2).
inline constexpr double kCubicRootsOracleRatio = 1.0;

/// Random CPTP maps and the trace channel against n^{1-1/p}.
SuiteReport suite_thm1(const std::vector<int>& n_list, const std::vector<PExponent>& p_grid,
                       int samples, std::uint64_t seed);

/// Unital maps are contractive at every p; non-unital TP maps expand at p > 1.
SuiteReport suite_unital_equivalence(int n, const std::vector<PExponent>& p_grid, int samples,
                                     std::uint64_t seed);

/// Traceless-Hermitian bound: saturator, random positive TP maps, closed-form
/// identity and the spectrum program.
SuiteReport suite_h01(const std::vector<int>& n_list, const std::vector<PExponent>& p_grid,
                      std::uint64_t seed, int samples = kDefaultSamples);

SuiteReport suite_qubit(int samples, const std::vector<PExponent>& p_grid, std::uint64_t seed);

SuiteReport suite_qutrit_probe(const std::vector<PExponent>& p_grid, std::uint64_t seed);

/// lower <= ||T||_{1-1}^{1/p} ||T||_{inf-inf}^{1-1/p} on CPTP and non-positive maps.
SuiteReport suite_riesz_thorin(const std::vector<int>& n_list,
                               const std::vector<PExponent>& p_grid, int samples,
                               std::uint64_t seed);

struct VerifyAllOptions {
  /// Overrides the per-suite dimension lists when non-empty.
  std::vector<int> n_list;
  std::vector<PExponent> p_grid = default_p_grid();
  int samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
};

SuiteReport suite_all(const VerifyAllOptions& opts);

}  // namespace contractivity
