#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bramble::cli {

/// Exit codes: 0 success, 1 configuration or operational error, 2 a checked
/// mathematical assertion failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAssertion = 2;

/// Runs the command line; reports go to `out` (or --out files), logs and
/// errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "key = value" lines ('#' starts a comment, values may be quoted).
/// Repeated keys and whitespace-separated values both accumulate.
std::multimap<std::string, std::string> read_config(const std::string& path);

}  // namespace bramble::cli
