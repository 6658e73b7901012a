#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace synwalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point behind the `synwalk` binary. args excludes the program name.
// Machine-readable output (JSON) goes to `out`, human summaries and error
// messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace synwalk::cli
