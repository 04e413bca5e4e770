#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace resokit::cli {

inline constexpr std::string_view version = "0.1.0";

enum ExitCode : int { ok = 0, input_error = 2, numerical_error = 3, verify_breach = 4 };

/// Runs one command line (without the program name). Tables go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resokit::cli
