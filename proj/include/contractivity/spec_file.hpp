#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "contractivity/channel.hpp"

namespace contractivity {

/// Validated channel-spec document: {"kind": ..., "n": ..., "params": {...}}.
/// Complex scalars are [re, im]; matrices are row-major nested arrays.
struct ChannelSpec {
  std::string kind;
  int n = 0;
  nlohmann::json params = nlohmann::json::object();
};

/// Malformed spec. `field` is a JSON pointer ("/params/mu"); `line` and
/// `column` are 1-based and zero when unknown.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& message, std::string field, int line = 0, int column = 0);
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string field_;
  int line_;
  int column_;
};

ChannelSpec parse_channel_spec(std::string_view text);
ChannelSpec load_channel_spec(const std::filesystem::path& path);
std::string emit_channel_spec(const ChannelSpec& spec);

/// Builds the map and checks representation coherence (1e-9).
SuperOp build_channel(const ChannelSpec& spec);

nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

}  // namespace contractivity
