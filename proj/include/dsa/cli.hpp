#pragma once

#include <string>
#include <vector>

namespace dsa::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 usage/config error (nothing written), 2 runtime
// failure mid-run.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace dsa::cli
