#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace willmore::cli {

inline constexpr const char* kToolName = "willmore";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 2;
inline constexpr int kSolverFailure = 3;

// Parses args (without the program name), runs one command and writes its
// reports under --out. Messages go to out / err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace willmore::cli
