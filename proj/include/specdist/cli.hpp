#pragma once

#include <ostream>

namespace specdist {

/// Exit codes: 0 ok, 1 computational or file error, 2 usage error, 3 suite failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace specdist
