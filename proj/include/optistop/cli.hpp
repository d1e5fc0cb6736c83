// cli.hpp
#pragma once
#include <iosfwd>

namespace optistop {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitValidation = 3, kExitDivergence = 4 };

// Subcommands: rankits, plan, advise, simulate, serve. Results go to `out`;
// prompts and diagnostics to `err`. `in` feeds the interactive advise loop.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace optistop
