#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divref::cli {

// Runs the divref command line. Returns the process exit code:
// 0 success, 1 usage, 2 data error, 3 provider error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0..10", "0,2,5" or a mix ("0..3,10").
std::vector<int> parse_int_list(const std::string& spec);

}  // namespace divref::cli
