#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace contractivity {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// One checked inequality. `bound` is the closed-form value the case is
/// tested against; `check` names the inequality and its tolerance.
struct CaseRecord {
  std::string suite;
  std::string label;
  int n = 0;
  std::optional<std::string> p;
  std::optional<std::string> domain;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> bound;
  std::string check;
  bool pass = false;
  /// Informational cases are reported but never affect the verdict.
  bool informational = false;
  double ms = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::string version = kToolkitVersion;
  std::vector<CaseRecord> cases;

  bool verdict() const;
  std::size_t failures() const;
  void append(const SuiteReport& other);
};

struct ReportFormat {
  /// Drops the timestamp and per-case wall times so reports are byte-stable.
  bool no_timestamp = false;
};

nlohmann::json to_json(const SuiteReport& report, const ReportFormat& fmt = {});
std::string render_json(const SuiteReport& report, const ReportFormat& fmt = {});
/// Columns: suite,label,n,p,domain,lower,upper,bound,pass,ms
std::string render_csv(const SuiteReport& report, const ReportFormat& fmt = {});

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace contractivity
