#include "contractivity/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

namespace contractivity {

using nlohmann::json;

bool SuiteReport::verdict() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  std::size_t bad = 0;
  for (const auto& c : cases)
    if (!c.informational && !c.pass) ++bad;
  return bad;
}

void SuiteReport::append(const SuiteReport& other) {
  cases.insert(cases.end(), other.cases.begin(), other.cases.end());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // nlohmann's serializer emits the shortest representation that round-trips.
  return json(x).dump();
}

namespace {

json opt_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json opt_string(const std::optional<std::string>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_opt(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? format_double(*v) : std::string();
}

}  // namespace

json to_json(const SuiteReport& report, const ReportFormat& fmt) {
  json doc;
  doc["schema"] = kReportSchemaVersion;
  doc["suite"] = report.suite;
  doc["seed"] = report.seed;
  doc["version"] = report.version;
  if (!fmt.no_timestamp) doc["timestamp"] = utc_now();
  json cases = json::array();
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const auto& c = report.cases[i];
    json row;
    row["index"] = i;
    row["suite"] = c.suite;
    row["label"] = c.label;
    row["n"] = c.n;
    row["p"] = opt_string(c.p);
    row["domain"] = opt_string(c.domain);
    row["lower"] = opt_number(c.lower);
    row["upper"] = opt_number(c.upper);
    row["bound"] = opt_number(c.bound);
    row["check"] = c.check;
    row["pass"] = c.pass;
    row["informational"] = c.informational;
    row["ms"] = fmt.no_timestamp ? json(nullptr) : json(c.ms);
    row["details"] = c.details;
    cases.push_back(std::move(row));
  }
  doc["cases"] = std::move(cases);
  doc["failures"] = report.failures();
  doc["verdict"] = report.verdict() ? "pass" : "fail";
  return doc;
}

std::string render_json(const SuiteReport& report, const ReportFormat& fmt) {
  return to_json(report, fmt).dump(2) + "\n";
}

std::string render_csv(const SuiteReport& report, const ReportFormat& fmt) {
  std::ostringstream os;
  os << "suite,label,n,p,domain,lower,upper,bound,pass,ms\n";
  for (const auto& c : report.cases) {
    os << csv_field(c.suite) << ',' << csv_field(c.label) << ',' << c.n << ','
       << csv_field(c.p.value_or("")) << ',' << csv_field(c.domain.value_or("")) << ','
       << csv_opt(c.lower) << ',' << csv_opt(c.upper) << ',' << csv_opt(c.bound) << ','
       << (c.informational ? "info" : (c.pass ? "true" : "false")) << ','
       << (fmt.no_timestamp ? std::string() : format_double(c.ms)) << '\n';
  }
  return os.str();
}

}  // namespace contractivity
