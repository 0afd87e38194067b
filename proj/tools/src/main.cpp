#include <cstdlib>
#include <iostream>

#include <unistd.h>

#include "masforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    masforge::CommandOptions options;
    options.color = std::getenv("MASFORGE_NO_COLOR") == nullptr && isatty(STDERR_FILENO);
    return masforge::run_command(args, std::cout, std::cerr, std::cin, options).exit_code;
}
