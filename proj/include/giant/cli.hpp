#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ga::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kNumerical = 2;

/// `min:max:count` (count >= 2, min < max). With allow_scalar a single
/// number yields a one-point grid. Throws DomainError otherwise.
std::vector<double> parse_grid(const std::string& text, bool allow_scalar = false);

/// Runs one subcommand; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace ga::cli
