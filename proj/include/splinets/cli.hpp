#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace splinets {

// Exit codes: 0 success, 1 numerical or validity failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace splinets
