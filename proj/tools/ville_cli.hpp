#ifndef VILLE_TOOLS_VILLE_CLI_HPP
#define VILLE_TOOLS_VILLE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ville::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kReject = 1;  // test rejected, or transform FAIL
inline constexpr int kUsage = 2;   // usage, parse, domain or protocol error
inline constexpr int kTotalConflict = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ville::cli

#endif  // VILLE_TOOLS_VILLE_CLI_HPP
