#pragma once

#include <string>
#include <vector>

namespace specres::cli {

// Runs one invocation; args excludes the program name. Returns the process
// exit code: 0 success, 2 usage or input, 3 divergence or numerical failure,
// 4 branch or root failure. A replay whose outputs differ returns 1.
int run(const std::vector<std::string>& args);

} // namespace specres::cli
