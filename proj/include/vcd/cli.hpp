#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vcd::cli {

enum ExitCode : int { ok = 0, config_error = 1, numeric_failure = 2, residual_cap = 3 };

/// Moser runs whose largest pullback residual exceeds this exit with `residual_cap`.
constexpr double residual_hard_cap = 1e-2;

/// Parses `vcd <invariants|trace|twist|moser|decide> --config PATH [--out DIR] [--tol X] [--seed N]`,
/// writes the reports into the output directory and echoes the main JSON report to `out`.
auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int;
auto run_cli(int argc, char** argv) -> int;

}  // namespace vcd::cli
