#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one `ddk` command. args excludes the program name. Diagnostics go to
/// err; normal output (help text, summaries) to out.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddk
