#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "contractivity/bloch.hpp"
#include "contractivity/norms.hpp"

using namespace contractivity;

namespace {

const PExponent kInf = PExponent::infinity();
const PExponent kGrid[] = {PExponent(1.0), PExponent(1.5), PExponent(2.0), PExponent(3.0),
                           PExponent::infinity()};

EstimatorConfig quick(std::uint64_t seed = 42) {
  EstimatorConfig cfg;
  cfg.restarts = 8;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("domains") {
  CHECK(parse_domain("traceless_hermitian") == NormDomain::traceless_hermitian);
  CHECK_THROWS_AS(parse_domain("unitary"), std::invalid_argument);
  for (NormDomain d : {NormDomain::all, NormDomain::hermitian, NormDomain::traceless_hermitian,
                       NormDomain::traceless_all}) {
    CHECK(parse_domain(to_string(d)) == d);
    const auto basis = domain_basis(3, d);
    const std::size_t expected = d == NormDomain::all ? 18 : d == NormDomain::hermitian ? 9
                               : d == NormDomain::traceless_hermitian                 ? 8
                                                                                      : 16;
    REQUIRE(basis.size() == expected);
    // Orthonormal under the real inner product Re tr(A* B).
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const double ip = (basis[i].adjoint() * basis[j]).trace().real();
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
    const ComplexMatrix a = Rng(4).ginibre(3, 3);
    const ComplexMatrix pa = project_to_domain(a, d);
    CHECK(max_abs(project_to_domain(pa, d) - pa) < 1e-14);
    if (is_traceless(d)) CHECK(std::abs(pa.trace()) < 1e-12 * 3);
    if (is_hermitian_domain(d)) CHECK(is_hermitian(pa));
  }
}

TEST_CASE("closed-form bounds") {
  CHECK(theorem1_bound(2, PExponent(2.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(theorem1_bound(3, PExponent(1.0)) == 1.0);
  CHECK(theorem1_bound(3, kInf) == 3.0);
  for (PExponent p : kGrid) CHECK(h01_bound(2, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h01_bound(3, PExponent(2.0)) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-15));
  CHECK(h01_bound(3, kInf) == 1.0);
  CHECK(h01_bound(4, kInf) == 2.0);
  CHECK_THROWS_AS(h01_bound(1, PExponent(2.0)), std::invalid_argument);
  for (PExponent p : kGrid) CHECK(saturation_ratio(2, 1, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(saturation_ratio(3, 2, PExponent(2.0)) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(saturation_ratio(4, 2, PExponent(3.0)) == doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(saturation_ratio(3, 3, PExponent(2.0)), std::invalid_argument);
  CHECK_THROWS_AS(saturation_ratio(3, 0, PExponent(2.0)), std::invalid_argument);
  CHECK(optimal_saturation_dim(4) == 2);
  CHECK(optimal_saturation_dim(5) == 3);
}

TEST_CASE("saturation identity at the optimal rank") {
  for (int n = 2; n <= 12; ++n)
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
      const PExponent pe(p);
      CHECK(std::abs(saturation_ratio(n, optimal_saturation_dim(n), pe) - h01_bound(n, pe)) <= 1e-12);
    }
}

TEST_CASE("saturating witness") {
  const ComplexMatrix w = saturating_witness(5, 3);
  CHECK(std::abs(w.trace()) < 1e-14);
  CHECK(is_hermitian(w));
  for (PExponent p : kGrid)
    CHECK(norm_ratio(make_projector_measurement(5, 3), w, p) ==
          doctest::Approx(saturation_ratio(5, 3, p)).epsilon(1e-12));
}

TEST_CASE("Russo-Dye value") {
  CHECK(russo_dye_inf_norm(make_random_unitary_mixture(3, 2, 1)).value == doctest::Approx(1.0));
  const RussoDyeValue tr = russo_dye_inf_norm(make_trace_channel(3));
  CHECK(tr.value == doctest::Approx(3.0));
  CHECK(tr.positivity_verified);
  BlochRep b;
  b.r = Eigen::Vector3d(0.3, -0.4, 0.0);
  b.R.setZero();
  CHECK(russo_dye_inf_norm(channel_of(b)).value == doctest::Approx(1.5));
  BlochRep big;
  big.R = 2.0 * Eigen::Matrix3d::Identity();
  CHECK_FALSE(russo_dye_inf_norm(channel_of(big)).positivity_verified);
}

TEST_CASE("norm_1_rank_one") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    CHECK(norm_1_rank_one(random_positive_tp_qubit(seed)) == doctest::Approx(1.0).epsilon(1e-6));
  BlochRep big;
  big.R = 2.0 * Eigen::Matrix3d::Identity();
  CHECK(norm_1_rank_one(channel_of(big)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(norm_1_rank_one(make_trace_channel(3)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("duality between the 1-1 and inf-inf values") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SuperOp t = make_random_cptp(3, 2, 2, seed);
    CHECK(std::abs(norm_1_rank_one(t) - russo_dye_inf_norm(adjoint(t)).value) <= 1e-6);
  }
}

TEST_CASE("exact_norm_p2") {
  CHECK(exact_norm_p2(make_identity(3)) == doctest::Approx(1.0));
  CHECK(exact_norm_p2(make_trace_channel(2)) == doctest::Approx(std::sqrt(2.0)));
  BlochRep b;
  b.R = Eigen::Vector3d(0.8, 0.5, 0.2).asDiagonal();
  CHECK(exact_norm_p2(channel_of(b)) == doctest::Approx(1.0));
}

TEST_CASE("riesz_thorin_bound") {
  for (PExponent p : kGrid) {
    CHECK(riesz_thorin_bound(make_random_unitary_mixture(3, 3, 2), p) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(riesz_thorin_bound(make_trace_channel(3), p) ==
          doctest::Approx(theorem1_bound(3, p)).epsilon(1e-6));
  }
  const SuperOp t = make_depolarizing(3, -1.5);
  const MapFacts f = analyze_map(t);
  CHECK(riesz_thorin_bound(f, PExponent(1.0)) == doctest::Approx(f.norm_1_1));
  CHECK(riesz_thorin_bound(f, kInf) == doctest::Approx(f.norm_inf_inf));
}

TEST_CASE("estimate_norm examples") {
  SUBCASE("trace channel attains the bound") {
    const NormEstimate e = estimate_norm(make_trace_channel(3), PExponent(2.0), NormDomain::all, quick());
    CHECK(e.lower == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    REQUIRE(e.upper.certified());
    CHECK(*e.upper.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  }
  SUBCASE("projector measurement on the traceless hyperplane") {
    const NormEstimate e = estimate_norm(make_projector_measurement(3, 2), PExponent(2.0),
                                         NormDomain::traceless_hermitian, quick());
    CHECK(e.lower >= 1.1547005 - 1e-5);
    REQUIRE(e.upper.certified());
    CHECK(*e.upper.value == doctest::Approx(h01_bound(3, PExponent(2.0))));
  }
  SUBCASE("identity on every domain") {
    for (NormDomain d : {NormDomain::all, NormDomain::hermitian, NormDomain::traceless_hermitian,
                         NormDomain::traceless_all})
      for (PExponent p : kGrid)
        CHECK(std::abs(estimate_norm(make_identity(3), p, d, quick()).lower - 1.0) <= 1e-9);
  }
}

TEST_CASE("estimate invariants") {
  const SuperOp t = make_random_cptp(3, 3, 2, 12);
  for (PExponent p : kGrid)
    for (NormDomain d : {NormDomain::all, NormDomain::traceless_hermitian, NormDomain::traceless_all}) {
      const NormEstimate e = estimate_norm(t, p, d, quick());
      CHECK(e.lower >= 0.0);
      if (e.upper.certified()) CHECK(e.lower <= *e.upper.value + 1e-9);
      CHECK(max_abs(project_to_domain(e.witness, d) - e.witness) < 1e-10);
      CHECK(std::abs(schatten_norm(e.witness, p) - 1.0) < 1e-10);
      CHECK(std::abs(schatten_norm(contractivity::apply(t, e.witness), p) - e.lower) < 1e-10);
    }
}

TEST_CASE("estimates grow with the domain") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SuperOp t = make_random_cptp(3, 3, 3, seed);
    for (PExponent p : kGrid) {
      const double th = estimate_norm(t, p, NormDomain::traceless_hermitian, quick(seed)).lower;
      const double h = estimate_norm(t, p, NormDomain::hermitian, quick(seed)).lower;
      const double a = estimate_norm(t, p, NormDomain::all, quick(seed)).lower;
      CHECK(th <= h + 1e-9);
      CHECK(h <= a + 1e-9);
    }
  }
}

TEST_CASE("estimates are deterministic for a fixed seed") {
  const SuperOp t = make_random_cptp(3, 2, 2, 3);
  const NormEstimate a = estimate_norm(t, PExponent(1.5), NormDomain::all, quick(9));
  const NormEstimate b = estimate_norm(t, PExponent(1.5), NormDomain::all, quick(9));
  CHECK(a.lower == b.lower);
  CHECK(max_abs(a.witness - b.witness) == 0.0);
}

TEST_CASE("estimate_norm errors and certificate selection") {
  // A -> i A does not preserve Hermiticity.
  const SuperOp rot(2, 2, Complex(0.0, 1.0) * make_identity(2).natural());
  CHECK_THROWS_AS(estimate_norm(rot, PExponent(2.0), NormDomain::hermitian), std::invalid_argument);
  CHECK_NOTHROW(estimate_norm(rot, PExponent(2.0), NormDomain::traceless_all, quick()));
  CHECK_THROWS_AS(estimate_norm(make_identity(1), PExponent(2.0), NormDomain::traceless_all),
                  std::invalid_argument);
  // A non-positive map only has the interpolation certificate.
  const NormEstimate e = estimate_norm(make_depolarizing(3, -1.5), PExponent(1.5),
                                       NormDomain::traceless_hermitian, quick());
  REQUIRE(e.upper.certified());
  CHECK(e.upper.source == "riesz_thorin");
  CHECK(e.lower > 0.0);
  CHECK(e.lower <= *e.upper.value + 1e-9);
  UpperBound none;
  CHECK_FALSE(none.certified());
}

TEST_CASE("brute force agrees with the ascent on small cases") {
  CHECK(brute_force_norm(make_identity(2), PExponent(1.5), NormDomain::all, 4000) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(brute_force_norm(make_trace_channel(2), kInf, NormDomain::all, 20000) - 2.0) <= 1e-5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SuperOp t = make_random_cptp(2, 2, 2, seed);
    CHECK(std::abs(brute_force_norm(t, PExponent(2.0), NormDomain::all, 20000) - exact_norm_p2(t)) <= 1e-5);
  }
  CHECK_THROWS_AS(brute_force_norm(make_identity(2), PExponent(2.0), NormDomain::all, 0),
                  std::invalid_argument);
}

TEST_CASE("spectrum program") {
  CHECK(h01_spectrum_oracle(2, PExponent(2.0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(h01_spectrum_oracle(3, PExponent(2.0)) == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
  CHECK(h01_spectrum_oracle(4, PExponent(2.0)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(h01_spectrum_oracle(3, PExponent(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(h01_spectrum_oracle(3, kInf), std::invalid_argument);
  CHECK_THROWS_AS(h01_spectrum_oracle(1, PExponent(2.0)), std::invalid_argument);
}
