#pragma once

#include <string>
#include <vector>

namespace chanalyze::cli {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace chanalyze::cli
