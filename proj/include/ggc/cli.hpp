#ifndef GGC_CLI_HPP
#define GGC_CLI_HPP

#include <string>
#include <vector>

namespace ggc {

/// Command-line entry point; `args` excludes the program name.
/// Exit codes: 0 success, 1 usage error, 2 numerical/configuration failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace ggc

#endif  // GGC_CLI_HPP
