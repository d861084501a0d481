#pragma once

#include <iosfwd>

namespace contractivity {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `contractivity` tool. Returns the process exit code:
/// 0 when every invoked check passes, 1 on a numerical failure, 2 on usage
/// or input errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace contractivity
