#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carat::cli {

// exit codes: 0 affirmative, 1 negative verdict, 2 not applicable,
// 3 input error, 4 numeric failure
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carat::cli
