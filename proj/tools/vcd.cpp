#include "vcd/cli.hpp"

auto main(int argc, char** argv) -> int { return vcd::cli::run_cli(argc, argv); }
