#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linkfm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitRouteDisagreement = 3;
inline constexpr int kExitBudget = 4;

/// Runs one command line. args excludes the program name. Results go to out,
/// the effective configuration and diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linkfm::cli
