#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace atprank {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSchema = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitDomain = 5;

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of the `atprank` tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace atprank
