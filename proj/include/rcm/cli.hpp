#pragma once

#include <iosfwd>

namespace rcm {

/// Entry point of the `rcm` command line tool (subcommands `derive` and `verify`).
/// Exit codes: 0 success, 1 order threshold missed or a run failed, 2 invalid input.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rcm
