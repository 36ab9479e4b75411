#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace mdlab::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBudget = 1;
inline constexpr int kUsage = 2;
inline constexpr int kCheckFailed = 3;
inline constexpr int kInternal = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);
int run(int argc, const char* const* argv);

}  // namespace mdlab::cli
