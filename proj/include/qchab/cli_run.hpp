#pragma once

#include <string>
#include <vector>

namespace qchab {

struct CliResult {
    int exit_code = 0;
    std::string output;
};

/** Exit codes: 0 success; 2 invalid curve / bad reduction / malformed input;
 * 3 precision exhausted; 4 hypothesis metadata missing for qc commands;
 * 5 internal consistency failure (residual above threshold). */
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace qchab
