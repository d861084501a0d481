// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "contractivity/bloch.hpp"
#include "contractivity/norms.hpp"
#include "contractivity/suites.hpp"

#ifndef CONTRACTIVITY_CLI_PATH
#error "CONTRACTIVITY_CLI_PATH must name the contractivity executable"
#endif

using namespace contractivity;

namespace {

constexpr std::uint64_t kSeed = 42;
const PExponent kInf = PExponent::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first few violations so the failing line says what broke.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream os;
    os << summary << ", " << checks_ << " checks";
    if (failures_) os << ", " << failures_ << " violations: " << notes_;
    return {failures_ == 0, os.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string notes_;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string ctx(const std::string& label, PExponent p, const std::string& extra = {}) {
  return label + " p=" + p.to_string() + (extra.empty() ? "" : " " + extra);
}

// Every (lower, interpolation bound) pair seen by the run, for criterion 10.
struct SandwichPoint {
  std::string where;
  double lower;
  double rt;
};
std::vector<SandwichPoint> g_sandwich;

NormEstimate estimate_tracked(const SuperOp& t, PExponent p, NormDomain d, const MapFacts& facts,
                              const std::string& where) {
  const NormEstimate est = estimate_norm(t, p, d, EstimatorConfig{32, 2000, 1e-9, kSeed}, facts);
  g_sandwich.push_back({where + " " + ctx(t.label(), p, to_string(d)), est.lower,
                        riesz_thorin_bound(facts, p)});
  return est;
}

SuperOp random_positive_tp(int n, int k, std::uint64_t seed) {
  SuperOp t = make_random_cptp(n, n, n, seed);
  // Odd samples are positive but not completely positive.
  if (k % 2 == 1) t = compose(make_transpose(n), t);
  return t;
}

Outcome c1_thm1_saturation() {
  Tally tally;
  for (int n : {2, 3, 4}) {
    const SuperOp t = make_trace_channel(n);
    const MapFacts f = analyze_map(t);
    for (PExponent p : default_p_grid()) {
      const double bound = theorem1_bound(n, p);
      const double lower = estimate_tracked(t, p, NormDomain::all, f, "c1").lower;
      tally.check(std::abs(lower - bound) <= 1e-6 * bound,
                  ctx(t.label(), p, "lower=" + num(lower) + " bound=" + num(bound)));
    }
  }
  return tally.outcome("trace channel n=2..4 on the full grid");
}

Outcome c2_thm1_bound() {
  Tally tally;
  Rng seeds(kSeed, 2);
  for (int n : {2, 3})
    for (int k = 0; k < 20; ++k) {
      const SuperOp t = make_random_cptp(n, n + k % 2, n, seeds.next_seed());
      const MapFacts f = analyze_map(t);
      for (PExponent p : default_p_grid()) {
        const double lower = estimate_tracked(t, p, NormDomain::all, f, "c2").lower;
        tally.check(lower <= theorem1_bound(n, p) + 1e-6, ctx(t.label(), p, "lower=" + num(lower)));
      }
    }
  return tally.outcome("40 random CPTP maps");
}

Outcome c3_unital() {
  Tally tally;
  Rng seeds(kSeed, 3);
  const int n = 3;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  auto predicates = [&](const SuperOp& t, bool expect_unital) {
    const MapFacts f = analyze_map(t);
    const ChannelProps props = check_props(t);
    const ComplexMatrix t_id = contractivity::apply(t, id);
    bool i = true, iii = true, iv = false;
    for (PExponent p : default_p_grid()) {
      const double lower = estimate_tracked(t, p, NormDomain::all, f, "c3").lower;
      const bool above_one = !(p == PExponent(1.0));
      const double witness = schatten_norm(t_id, p) / schatten_norm(id, p);
      if (above_one && witness > 1.0 + 1e-9) i = false;
      iii = iii && lower <= 1.0 + 1e-6;
      if (above_one && lower <= 1.0 + 1e-6) iv = true;
      if (expect_unital) {
        tally.check(lower <= 1.0 + 1e-6, ctx(t.label(), p, "lower=" + num(lower)));
      } else if (above_one) {
        tally.check(witness > 1.0, ctx(t.label(), p, "witness=" + num(witness)));
      }
    }
    tally.check(props.unital == expect_unital, t.label() + " unital flag");
    tally.check(i == props.unital && iii == props.unital && iv == props.unital,
                t.label() + " four predicates disagree");
  };
  for (int k = 0; k < 20; ++k) predicates(make_random_unitary_mixture(n, 2 + k % 3, seeds.next_seed()), true);
  for (int k = 0; k < 20; ++k) predicates(make_random_cptp(n, n, n, seeds.next_seed()), false);
  return tally.outcome("20 unitary mixtures, 20 non-unital TP maps, n=3");
}

Outcome c4_h01_attainment() {
  Tally tally;
  Rng seeds(kSeed, 4);
  const PExponent attain_grid[] = {PExponent(1.0), PExponent(2.0), PExponent(3.0), kInf};
  for (int n : {2, 3, 4, 5}) {
    const SuperOp sat = make_projector_measurement(n, optimal_saturation_dim(n));
    const MapFacts f = analyze_map(sat);
    for (PExponent p : attain_grid) {
      const double lower = estimate_tracked(sat, p, NormDomain::traceless_hermitian, f, "c4").lower;
      tally.check(std::abs(lower - h01_bound(n, p)) <= 1e-5,
                  ctx(sat.label(), p, "lower=" + num(lower) + " bound=" + num(h01_bound(n, p))));
    }
    for (int k = 0; k < 10; ++k) {
      const SuperOp t = random_positive_tp(n, k, seeds.next_seed());
      const MapFacts tf = analyze_map(t);
      tally.check(tf.positive && tf.trace_preserving, t.label() + " not positive TP");
      for (PExponent p : default_p_grid()) {
        const double lower = estimate_tracked(t, p, NormDomain::traceless_hermitian, tf, "c4").lower;
        tally.check(lower <= h01_bound(n, p) + 1e-6, ctx(t.label(), p, "lower=" + num(lower)));
      }
    }
  }
  return tally.outcome("saturator n=2..5, 40 random positive TP maps (half not CP)");
}

Outcome c5_identity() {
  Tally tally;
  double worst = 0.0;
  for (int n = 2; n <= 12; ++n)
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
      const PExponent pe(p);
      const double dev = std::abs(saturation_ratio(n, optimal_saturation_dim(n), pe) - h01_bound(n, pe));
      worst = std::max(worst, dev);
      tally.check(dev <= 1e-12, "n=" + std::to_string(n) + " p=" + pe.to_string() + " dev=" + num(dev));
    }
  return tally.outcome("n=2..12, worst deviation " + num(worst));
}

Outcome c6_spectrum_oracle() {
  Tally tally;
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n)
    for (double p : {1.5, 2.0, 3.0}) {
      const PExponent pe(p);
      const double dev = std::abs(h01_spectrum_oracle(n, pe) - std::pow(h01_bound(n, pe), p));
      worst = std::max(worst, dev);
      tally.check(dev <= 1e-6, "n=" + std::to_string(n) + " p=" + pe.to_string() + " dev=" + num(dev));
    }
  return tally.outcome("n=2..6, worst deviation " + num(worst));
}

Outcome c7_qubit() {
  Tally tally;
  Rng seeds(kSeed, 7);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t s = seeds.next_seed();
    const BlochRep b = random_positive_tp_bloch(s);
    const SuperOp t = channel_of(b).with_label("qubit(seed=" + std::to_string(s) + ")");
    const double smax = Eigen::JacobiSVD<Eigen::Matrix3d>(b.R).singularValues()(0);
    tally.check(smax <= 1.0 + 1e-12, t.label() + " sigma_max(R)=" + num(smax));
    const MapFacts f = analyze_map(t);
    for (PExponent p : default_p_grid())
      for (NormDomain d : {NormDomain::traceless_hermitian, NormDomain::traceless_all}) {
        const double lower = estimate_tracked(t, p, d, f, "c7").lower;
        worst = std::max(worst, lower);
        tally.check(lower <= 1.0 + 1e-6, ctx(t.label(), p, to_string(d) + " lower=" + num(lower)));
      }
  }
  return tally.outcome("100 maps, both traceless domains, max lower " + num(worst));
}

Outcome c8_qutrit() {
  Tally tally;
  const SuperOp t = make_qutrit_counterexample();
  const MapFacts f = analyze_map(t);
  for (PExponent p : {PExponent(1.0), kInf}) {
    const double lower = estimate_tracked(t, p, NormDomain::traceless_hermitian, f, "c8").lower;
    tally.check(lower <= 1.0 + 1e-6, ctx(t.label(), p, "lower=" + num(lower)));
  }
  const ComplexMatrix w = saturating_witness(3, 2);
  const double ratio = norm_ratio(t, w, PExponent(2.0));
  tally.check(is_hermitian(w) && std::abs(w.trace()) < 1e-12, "witness not Hermitian traceless");
  tally.check(ratio >= 1.1547 - 1e-4, "witness ratio " + num(ratio));
  const double lower = estimate_tracked(t, PExponent(2.0), NormDomain::traceless_hermitian, f, "c8").lower;
  tally.check(lower >= 1.1547 - 1e-4, "p=2 estimate " + num(lower));
  return tally.outcome("p=2 witness ratio " + num(ratio));
}

Outcome c9_exactness() {
  Tally tally;
  Rng seeds(kSeed, 9);
  double w2 = 0.0, winf = 0.0, w1 = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 2;
    const SuperOp t = make_random_cptp(n, n + (k / 2) % 2, 1 + k % 3 + (n == 3 ? 1 : 0), seeds.next_seed());
    const MapFacts f = analyze_map(t);
    const double est = estimate_tracked(t, PExponent(2.0), NormDomain::all, f, "c9").lower;
    const double dev = std::abs(est - exact_norm_p2(t));
    w2 = std::max(w2, dev);
    tally.check(dev <= 1e-8, t.label() + " p=2 dev=" + num(dev));
  }
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + k % 2;
    const SuperOp t = random_positive_tp(n, k, seeds.next_seed());
    const MapFacts f = analyze_map(t);
    const RussoDyeValue rd = russo_dye_inf_norm(t);
    const double est = estimate_tracked(t, kInf, NormDomain::all, f, "c9").lower;
    const double dev = std::abs(est - rd.value);
    winf = std::max(winf, dev);
    tally.check(rd.positivity_verified && dev <= 1e-6, t.label() + " p=inf dev=" + num(dev));
  }
  for (int k = 0; k < 30; ++k) {
    const std::uint64_t s = seeds.next_seed();
    const SuperOp t = k % 3 == 0 ? random_positive_tp_qubit(s) : random_positive_tp(2 + k % 2, k, s);
    const double dev = std::abs(norm_1_rank_one(t) - 1.0);
    w1 = std::max(w1, dev);
    tally.check(dev <= 1e-6, t.label() + " 1-1 dev=" + num(dev));
  }
  return tally.outcome("worst deviations p=2 " + num(w2) + ", p=inf " + num(winf) + ", 1-1 " + num(w1));
}

Outcome c10_riesz_thorin() {
  Tally tally;
  const SuiteReport suite = suite_riesz_thorin({2, 3}, default_p_grid(), 20, kSeed);
  for (const auto& c : suite.cases) {
    const double rt = c.details.at("riesz_thorin").get<double>();
    g_sandwich.push_back({"suite " + c.label + " p=" + c.p.value_or("?"), c.lower.value_or(0.0), rt});
  }
  double worst = -1e300;
  for (const auto& s : g_sandwich) {
    worst = std::max(worst, s.lower - s.rt);
    tally.check(s.lower <= s.rt + 1e-8, s.where + " lower=" + num(s.lower) + " rt=" + num(s.rt));
  }
  return tally.outcome(std::to_string(g_sandwich.size()) + " estimates, max lower - bound " + num(worst));
}

Outcome c11_oracle_independence() {
  Tally tally;
  Rng seeds(kSeed, 11);
  const PExponent grid[] = {PExponent(1.5), PExponent(2.0), PExponent(3.0)};
  const NormDomain domains[] = {NormDomain::all, NormDomain::hermitian, NormDomain::traceless_hermitian,
                                NormDomain::traceless_all};
  double worst = 0.0;
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + k % 2;
    const std::uint64_t s = seeds.next_seed();
    const SuperOp t = n == 2 && k % 4 == 0 ? random_positive_tp_qubit(s) : make_random_cptp(n, n, 2, s);
    const PExponent p = grid[k % 3];
    const NormDomain d = domains[(k / 3) % 4];
    const MapFacts f = analyze_map(t);
    const NormEstimate est = estimate_tracked(t, p, d, f, "c11");
    const double bf = brute_force_norm(t, p, d, 20000, s);
    const double dev = std::abs(bf - est.lower);
    worst = std::max(worst, dev);
    tally.check(dev <= 1e-4, ctx(t.label(), p, to_string(d) + " brute=" + num(bf) + " est=" + num(est.lower)));
    if (est.upper.certified())
      tally.check(bf <= *est.upper.value + 1e-9, ctx(t.label(), p, "brute above " + est.upper.source));
  }
  return tally.outcome("30 qubit/qutrit cases, worst |brute - estimate| " + num(worst));
}

Outcome c12_qutrit_probe() {
  Tally tally;
  const SuiteReport rep = suite_qutrit_probe(default_p_grid(), kSeed);
  bool oracle_row = false, claim_row = false;
  double toolkit = 0.0;
  for (const auto& c : rep.cases) {
    if (c.label == "cubic_roots_witness") {
      oracle_row = true;
      toolkit = c.lower.value_or(-1.0);
      tally.check(c.pass && std::abs(toolkit - kCubicRootsOracleRatio) <= 1e-10,
                  "toolkit " + num(toolkit) + " vs oracle " + num(kCubicRootsOracleRatio));
    }
    if (c.label == "claim check: informational") claim_row = c.informational;
  }
  tally.check(oracle_row, "cubic-roots row missing");
  tally.check(claim_row, "informational claim-check row missing");
  tally.check(rep.verdict(), "qutrit suite verdict fail");
  return tally.outcome("toolkit ratio " + num(toolkit) + ", oracle " + num(kCubicRootsOracleRatio));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome c13_determinism() {
  Tally tally;
  const auto dir = std::filesystem::temp_directory_path();
  std::string reports[2];
  int codes[2];
  for (int i = 0; i < 2; ++i) {
    const auto out = dir / ("contractivity_acceptance_" + std::to_string(i) + ".json");
    std::filesystem::remove(out);
    const std::string cmd = std::string("\"") + CONTRACTIVITY_CLI_PATH +
                            "\" verify all --seed 42 --no-timestamp --out \"" + out.string() +
                            "\" 2>/dev/null";
    codes[i] = std::system(cmd.c_str());
    reports[i] = slurp(out);
  }
  tally.check(!reports[0].empty(), "no report written");
  tally.check(reports[0] == reports[1], "reports differ");
  tally.check(codes[0] == 0 && codes[1] == 0, "verify all exit codes " + std::to_string(codes[0]) +
                                                  "/" + std::to_string(codes[1]));
  return tally.outcome(std::to_string(reports[0].size()) + " bytes per report");
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "trace channel attains n^(1-1/p)", 30, c1_thm1_saturation},
      {2, "random CPTP maps obey n^(1-1/p)", 120, c2_thm1_bound},
      {3, "unital equivalence", 120, c3_unital},
      {4, "traceless-Hermitian bound attained and obeyed", 180, c4_h01_attainment},
      {5, "saturation ratio equals the closed form", 1, c5_identity},
      {6, "spectrum program maximum equals bound^p", 60, c6_spectrum_oracle},
      {7, "qubit maps contract on traceless inputs", 120, c7_qubit},
      {8, "qutrit map at p in {1, inf} and p = 2", 30, c8_qutrit},
      {9, "exact p=2, Russo-Dye and 1-1 cross-checks", 180, c9_exactness},
      {10, "Riesz-Thorin sandwich", 120, c10_riesz_thorin},
      {11, "brute-force oracle agreement", 300, c11_oracle_independence},
      {12, "cubic-roots witness and claim check", 30, c12_qutrit_probe},
      {13, "verify all is byte-identical across runs", 600, c13_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] criterion %2d: %s (%.1f s of %.0f s%s) %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                secs, c.budget_s, in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
