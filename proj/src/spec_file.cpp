#include "contractivity/spec_file.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "contractivity/bloch.hpp"

namespace contractivity {

using nlohmann::json;

SpecError::SpecError(const std::string& message, std::string field, int line, int column)
    : std::runtime_error([&] {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ", column " << column << ": ";
        if (!field.empty()) os << field << ": ";
        os << message;
        return os.str();
      }()),
      field_(std::move(field)),
      line_(line),
      column_(column) {}

namespace {

struct KindSchema {
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::map<std::string, KindSchema>& schemas() {
  static const std::map<std::string, KindSchema> table = {
      {"kraus", {{"operators"}, {}}},
      {"choi", {{"matrix"}, {"dim_out"}}},
      {"natural", {{"matrix"}, {"dim_out"}}},
      {"depolarizing", {{"mu"}, {}}},
      {"projector_measurement", {{"d"}, {}}},
      {"trace", {{}, {}}},
      {"transpose", {{}, {}}},
      {"qutrit_counterexample", {{}, {}}},
      {"bloch", {{"r", "R"}, {}}},
      {"unitary_mixture", {{"probabilities", "unitaries"}, {}}},
      {"random_cptp", {{"env_dim", "seed"}, {"dim_out"}}},
  };
  return table;
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw SpecError(msg, field);
}

double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "expected a finite number");
  return x;
}

long long as_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<long long>();
}

Complex as_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) fail(field, "expected a complex scalar [re, im]");
  return {as_real(v[0], field + "/0"), as_real(v[1], field + "/1")};
}

ComplexMatrix as_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "expected a nonempty array of rows");
  const auto rows = v.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rf = field + "/" + std::to_string(i);
    if (!v[i].is_array() || v[i].empty()) fail(rf, "expected a nonempty row array");
    if (i == 0) cols = v[i].size();
    if (v[i].size() != cols) fail(rf, "row length differs from row 0");
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = as_complex(v[i][j], field + "/" + std::to_string(i) + "/" + std::to_string(j));
  return m;
}

void validate_params(const ChannelSpec& spec) {
  const auto& kinds = schemas();
  const auto it = kinds.find(spec.kind);
  if (it == kinds.end()) fail("/kind", "unknown kind '" + spec.kind + "'");
  const auto& schema = it->second;
  for (const auto& [key, value] : spec.params.items()) {
    if (!schema.required.count(key) && !schema.optional.count(key)) {
      fail("/params/" + key, "unknown field for kind '" + spec.kind + "'");
    }
  }
  for (const auto& key : schema.required) {
    if (!spec.params.contains(key)) fail("/params/" + key, "missing required field");
  }
  // Type checks happen here so that diagnostics point at the offending field.
  const auto& p = spec.params;
  if (spec.kind == "kraus") {
    const auto& ops = p["operators"];
    if (!ops.is_array() || ops.empty()) fail("/params/operators", "expected a nonempty array");
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const std::string f = "/params/operators/" + std::to_string(k);
      const auto m = as_matrix(ops[k], f);
      if (m.cols() != spec.n) fail(f, "Kraus operator must have n columns");
    }
  } else if (spec.kind == "choi" || spec.kind == "natural") {
    as_matrix(p["matrix"], "/params/matrix");
    if (p.contains("dim_out") && as_integer(p["dim_out"], "/params/dim_out") < 1) {
      fail("/params/dim_out", "must be >= 1");
    }
  } else if (spec.kind == "depolarizing") {
    as_real(p["mu"], "/params/mu");
  } else if (spec.kind == "projector_measurement") {
    const auto d = as_integer(p["d"], "/params/d");
    if (d < 1 || d > spec.n - 1) fail("/params/d", "must satisfy 1 <= d <= n-1");
  } else if (spec.kind == "qutrit_counterexample") {
    if (spec.n != 3) fail("/n", "qutrit_counterexample needs n = 3");
  } else if (spec.kind == "transpose") {
    if (spec.n < 2) fail("/n", "transpose needs n >= 2");
  } else if (spec.kind == "bloch") {
    if (spec.n != 2) fail("/n", "bloch needs n = 2");
    if (!p["r"].is_array() || p["r"].size() != 3) fail("/params/r", "expected 3 reals");
    for (int k = 0; k < 3; ++k) as_real(p["r"][k], "/params/r/" + std::to_string(k));
    if (!p["R"].is_array() || p["R"].size() != 3) fail("/params/R", "expected 3 rows");
    for (int j = 0; j < 3; ++j) {
      const std::string f = "/params/R/" + std::to_string(j);
      if (!p["R"][j].is_array() || p["R"][j].size() != 3) fail(f, "expected 3 reals");
      for (int k = 0; k < 3; ++k) as_real(p["R"][j][k], f + "/" + std::to_string(k));
    }
  } else if (spec.kind == "unitary_mixture") {
    const auto& probs = p["probabilities"];
    const auto& us = p["unitaries"];
    if (!probs.is_array() || probs.empty()) fail("/params/probabilities", "expected a nonempty array");
    if (!us.is_array() || us.size() != probs.size()) {
      fail("/params/unitaries", "expected one unitary per probability");
    }
    for (std::size_t k = 0; k < probs.size(); ++k) {
      const double w = as_real(probs[k], "/params/probabilities/" + std::to_string(k));
      if (w < 0.0) fail("/params/probabilities/" + std::to_string(k), "must be nonnegative");
      const std::string f = "/params/unitaries/" + std::to_string(k);
      const auto u = as_matrix(us[k], f);
      if (u.rows() != spec.n || u.cols() != spec.n) fail(f, "expected an n x n matrix");
    }
  } else if (spec.kind == "random_cptp") {
    if (as_integer(p["env_dim"], "/params/env_dim") < 1) fail("/params/env_dim", "must be >= 1");
    if (as_integer(p["seed"], "/params/seed") < 0) fail("/params/seed", "must be >= 0");
    if (p.contains("dim_out") && as_integer(p["dim_out"], "/params/dim_out") < 1) {
      fail("/params/dim_out", "must be >= 1");
    }
  }
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ChannelSpec parse_channel_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw SpecError("invalid JSON: " + std::string(e.what()), "", line, col);
  }
  if (!doc.is_object()) fail("", "top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "kind" && key != "n" && key != "params") fail("/" + key, "unknown field");
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) fail("/kind", "expected a string");
  if (!doc.contains("n")) fail("/n", "missing required field");
  const auto n = as_integer(doc["n"], "/n");
  if (n < 1 || n > 64) fail("/n", "must satisfy 1 <= n <= 64");

  ChannelSpec spec;
  spec.kind = doc["kind"].get<std::string>();
  spec.n = static_cast<int>(n);
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) fail("/params", "expected an object");
    spec.params = doc["params"];
  }
  validate_params(spec);
  return spec;
}

ChannelSpec load_channel_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open channel spec file '" + path.string() + "'", "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_spec(buf.str());
}

std::string emit_channel_spec(const ChannelSpec& spec) {
  json doc;
  doc["kind"] = spec.kind;
  doc["n"] = spec.n;
  doc["params"] = spec.params;
  return doc.dump(2) + "\n";
}

nlohmann::json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

SuperOp build_channel(const ChannelSpec& spec) {
  validate_params(spec);
  const auto& p = spec.params;
  const int n = spec.n;
  // dim_out defaults to the value implied by the matrix shape.
  auto dim_from = [&](const ComplexMatrix& m, bool choi) {
    if (p.contains("dim_out")) return static_cast<int>(p["dim_out"].get<long long>());
    if (choi) return static_cast<int>(m.rows() / n);
    return static_cast<int>(std::lround(std::sqrt(static_cast<double>(m.rows()))));
  };

  SuperOp t = [&]() -> SuperOp {
    try {
      if (spec.kind == "kraus") {
        KrausSet k;
        for (const auto& op : p["operators"]) k.operators.push_back(as_matrix(op, "/params/operators"));
        return SuperOp::from_kraus(std::move(k), "kraus");
      }
      if (spec.kind == "choi") {
        const auto m = as_matrix(p["matrix"], "/params/matrix");
        return SuperOp::from_choi(n, dim_from(m, true), {m}, "choi");
      }
      if (spec.kind == "natural") {
        const auto m = as_matrix(p["matrix"], "/params/matrix");
        return SuperOp(n, dim_from(m, false), m, "natural");
      }
      if (spec.kind == "depolarizing") return make_depolarizing(n, p["mu"].get<double>());
      if (spec.kind == "projector_measurement") {
        return make_projector_measurement(n, static_cast<int>(p["d"].get<long long>()));
      }
      if (spec.kind == "trace") return make_trace_channel(n);
      if (spec.kind == "transpose") return make_transpose(n);
      if (spec.kind == "qutrit_counterexample") return make_qutrit_counterexample();
      if (spec.kind == "bloch") {
        BlochRep b;
        for (int k = 0; k < 3; ++k) b.r[k] = p["r"][k].get<double>();
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) b.R(j, k) = p["R"][j][k].get<double>();
        return channel_of(b);
      }
      if (spec.kind == "unitary_mixture") {
        std::vector<double> probs;
        std::vector<ComplexMatrix> us;
        for (const auto& w : p["probabilities"]) probs.push_back(w.get<double>());
        for (const auto& u : p["unitaries"]) us.push_back(as_matrix(u, "/params/unitaries"));
        return make_unitary_mixture(probs, us);
      }
      if (spec.kind == "random_cptp") {
        const int r = p.contains("dim_out") ? static_cast<int>(p["dim_out"].get<long long>()) : n;
        return make_random_cptp(n, r, static_cast<int>(p["env_dim"].get<long long>()),
                                p["seed"].get<std::uint64_t>());
      }
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what(), "/params");
    }
    fail("/kind", "unknown kind '" + spec.kind + "'");
  }();

  if (representation_mismatch(t) > 1e-9) {
    throw SpecError("representations disagree beyond 1e-9", "/params");
  }
  return t;
}

}  // namespace contractivity
