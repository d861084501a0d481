#include "contractivity/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contractivity/norms.hpp"
#include "contractivity/report.hpp"
#include "contractivity/spec_file.hpp"
#include "contractivity/suites.hpp"

namespace contractivity {

using nlohmann::json;

namespace {

constexpr int kMaxDefaultN = 5;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size() || text.find('-') != std::string::npos) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": expected a non-negative integer, got '" + text + "'");
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CONTRACTIVITY_SEED"); env && *env)
    return parse_seed(env, "CONTRACTIVITY_SEED");
  return kDefaultSeed;
}

PExponent parse_p(const std::string& text) {
  try {
    return PExponent::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("--p: " + std::string(e.what()));
  }
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string fixed7(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(7) << x;
  return os.str();
}

struct NormArgs {
  std::string channel;
  std::string p;
  std::string domain = "all";
  int restarts = EstimatorConfig{}.restarts;
  double tol = EstimatorConfig{}.tol;
  std::string seed;
  std::string out;
};

int run_norm(const NormArgs& a, std::ostream& out, std::ostream& err) {
  ChannelSpec spec;
  std::optional<SuperOp> built;
  try {
    spec = load_channel_spec(a.channel);
    built = build_channel(spec);
  } catch (const SpecError& e) {
    // what() already carries the line/column and the JSON pointer of the field.
    err << "error: " << a.channel << ": " << e.what() << '\n';
    return kExitUsage;
  }
  const SuperOp& t = *built;
  const PExponent p = parse_p(a.p);
  NormDomain domain;
  try {
    domain = parse_domain(a.domain);
  } catch (const std::exception& e) {
    throw UsageError("--domain: " + std::string(e.what()));
  }
  if (a.restarts < 1) throw UsageError("--restarts must be >= 1");
  if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");

  EstimatorConfig cfg;
  cfg.restarts = a.restarts;
  cfg.tol = a.tol;
  cfg.seed = a.seed.empty() ? default_seed() : parse_seed(a.seed, "--seed");

  NormEstimate est;
  try {
    est = estimate_norm(t, p, domain, cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const bool consistent = !est.upper.certified() || est.lower <= *est.upper.value + 1e-9;
  json doc;
  doc["channel"] = t.label().empty() ? spec.kind : t.label();
  doc["kind"] = spec.kind;
  doc["n"] = t.dim_in();
  doc["dim_out"] = t.dim_out();
  doc["p"] = p.to_string();
  doc["domain"] = to_string(domain);
  doc["seed"] = cfg.seed;
  doc["lower"] = est.lower;
  doc["upper"] = est.upper.value ? json(*est.upper.value) : json(nullptr);
  doc["upper_source"] = est.upper.certified() ? json(est.upper.source) : json(nullptr);
  doc["method"] = est.method;
  doc["converged"] = est.converged;
  doc["iterations"] = est.iterations;
  doc["witness"] = matrix_to_json(est.witness);
  doc["consistent"] = consistent;
  write_output(doc.dump(2) + "\n", a.out, out);
  return consistent ? kExitOk : kExitCheckFailed;
}

struct BoundArgs {
  std::string which;
  int n = 0;
  std::string p;
  std::optional<int> d;
};

int run_bound(const BoundArgs& a, std::ostream& out) {
  const PExponent p = parse_p(a.p);
  double value = 0.0;
  try {
    if (a.which == "thm1") {
      value = theorem1_bound(a.n, p);
    } else if (a.which == "h01") {
      value = h01_bound(a.n, p);
    } else {
      if (!a.d) throw UsageError("bound ratio requires --d");
      value = saturation_ratio(a.n, *a.d, p);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << fixed7(value) << '\n';
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  std::vector<int> n_list;
  std::vector<std::string> p_grid;
  int samples = kDefaultSamples;
  std::string seed;
  std::string out;
  std::string format = "json";
  bool no_timestamp = false;
  bool allow_large_n = false;
};

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<PExponent> grid;
  for (const auto& s : a.p_grid) grid.push_back(parse_p(s));
  if (grid.empty()) grid = default_p_grid();
  if (a.samples < 0) throw UsageError("--samples must be >= 0");
  for (int n : a.n_list) {
    if (n < 2) throw UsageError("--n values must be >= 2");
    if (n > kMaxDefaultN && !a.allow_large_n)
      throw UsageError("--n " + std::to_string(n) + " exceeds " + std::to_string(kMaxDefaultN) +
                       "; pass --allow-large-n to run it");
  }
  const std::uint64_t seed = a.seed.empty() ? default_seed() : parse_seed(a.seed, "--seed");
  auto dims = [&](std::vector<int> fallback) { return a.n_list.empty() ? fallback : a.n_list; };

  SuiteReport report;
  if (a.suite == "thm1") {
    report = suite_thm1(dims({2, 3, 4}), grid, a.samples, seed);
  } else if (a.suite == "unital") {
    report.suite = "unital";
    report.seed = seed;
    for (int n : dims({3})) report.append(suite_unital_equivalence(n, grid, a.samples, seed));
  } else if (a.suite == "h01") {
    report = suite_h01(dims({2, 3, 4, 5}), grid, seed, a.samples);
  } else if (a.suite == "qubit") {
    report = suite_qubit(a.samples, grid, seed);
  } else if (a.suite == "qutrit") {
    report = suite_qutrit_probe(grid, seed);
  } else if (a.suite == "riesz-thorin") {
    report = suite_riesz_thorin(dims({2, 3}), grid, a.samples, seed);
  } else {
    VerifyAllOptions opts;
    opts.n_list = a.n_list;
    opts.p_grid = grid;
    opts.samples = a.samples;
    opts.seed = seed;
    report = suite_all(opts);
  }

  ReportFormat fmt;
  fmt.no_timestamp = a.no_timestamp;
  const std::string text = a.format == "csv" ? render_csv(report, fmt) : render_json(report, fmt);
  write_output(text, a.out, out);
  err << "verify " << a.suite << ": " << report.cases.size() << " cases, " << report.failures()
      << " failed, verdict " << (report.verdict() ? "pass" : "fail") << '\n';
  return report.verdict() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contractivity of positive and trace-preserving maps under Schatten p-norms",
               "contractivity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolkitVersion));

  NormArgs norm_args;
  auto* norm = app.add_subcommand("norm", "Estimate an induced p->p norm of a channel file");
  norm->add_option("--channel", norm_args.channel, "Channel spec JSON file")->required();
  norm->add_option("--p", norm_args.p, "Exponent p >= 1 or 'inf'")->required();
  norm->add_option("--domain", norm_args.domain,
                   "all | hermitian | traceless_hermitian | traceless_all")
      ->capture_default_str();
  norm->add_option("--restarts", norm_args.restarts, "Random restarts")->capture_default_str();
  norm->add_option("--tol", norm_args.tol, "Relative stopping tolerance")->capture_default_str();
  norm->add_option("--seed", norm_args.seed, "Seed (default: $CONTRACTIVITY_SEED or 42)");
  norm->add_option("--out", norm_args.out, "Write the JSON result here instead of stdout");

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "Evaluate a closed-form bound");
  bound->add_option("which", bound_args.which, "thm1 | h01 | ratio")
      ->required()
      ->check(CLI::IsMember({"thm1", "h01", "ratio"}));
  bound->add_option("--n", bound_args.n, "Input dimension")->required();
  bound->add_option("--p", bound_args.p, "Exponent p >= 1 or 'inf'")->required();
  bound->add_option("--d", bound_args.d, "Projector rank (ratio only)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run verification suites and write a report");
  verify->add_option("suite", verify_args.suite, "thm1 | unital | h01 | qubit | qutrit | riesz-thorin | all")
      ->required()
      ->check(CLI::IsMember({"thm1", "unital", "h01", "qubit", "qutrit", "riesz-thorin", "all"}));
  verify->add_option("--n", verify_args.n_list, "Dimensions, comma separated")->delimiter(',');
  verify->add_option("--p-grid", verify_args.p_grid, "Exponents, comma separated (default 1,1.5,2,3,inf)")
      ->delimiter(',');
  verify->add_option("--samples", verify_args.samples, "Random maps per suite")->capture_default_str();
  verify->add_option("--seed", verify_args.seed, "Seed (default: $CONTRACTIVITY_SEED or 42)");
  verify->add_option("--out", verify_args.out, "Write the report here instead of stdout");
  verify->add_option("--format", verify_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  verify->add_flag("--no-timestamp", verify_args.no_timestamp,
                   "Omit the timestamp and wall times for byte-stable reports");
  verify->add_flag("--allow-large-n", verify_args.allow_large_n, "Permit dimensions above 5");

  if (argc > 1 && argv[1][0] != '-') {
    const std::string first = argv[1];
    if (first != "norm" && first != "bound" && first != "verify") {
      err << "error: unknown subcommand '" << first << "'\n\n" << app.help();
      return kExitUsage;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (norm->parsed()) return run_norm(norm_args, out, err);
    if (bound->parsed()) return run_bound(bound_args, out);
    return run_verify(verify_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace contractivity
