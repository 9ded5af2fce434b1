#ifndef STEPMAP_CLI_HPP
#define STEPMAP_CLI_HPP

#include <string>
#include <vector>

namespace stepmap {

// Runs one CLI invocation. Exit codes: 0 success, 1 usage or I/O error,
// 2 domain failure; `certify` uses 0/1/2 for
// univalent/inconclusive/not_univalent.
int run_command(const std::vector<std::string>& args);

}  // namespace stepmap

#endif  // STEPMAP_CLI_HPP
