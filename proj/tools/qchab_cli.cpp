#include <iostream>
#include <vector>

#include "qchab/cli_run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    qchab::CliResult res = qchab::run_cli(args);
    std::cout << res.output;
    return res.exit_code;
}
