#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kdvb::app {

/// Parses arguments, dispatches solve|convergence|sweep|spectrum|cases|verify, and writes
/// outputs. Returns the process exit status; failures print one "E_CODE: message" line to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kdvb::app
