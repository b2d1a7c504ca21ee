#ifndef FICP_TOOLS_CLI_HPP
#define FICP_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace ficp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name, e.g. {"register", "--data", "d.xyz", "--model", "m.xyz"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ficp::cli

#endif  // FICP_TOOLS_CLI_HPP
