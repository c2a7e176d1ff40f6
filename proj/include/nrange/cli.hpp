#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nrange {

inline constexpr const char* kVersion = "1.0.0";

/// Runs one `nrange` invocation (args exclude the program name). Exit codes:
/// 0 success / all checks pass, 1 some check failed or replay mismatch,
/// 2 usage or input error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrange
