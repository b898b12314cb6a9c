#include <iostream>
#include <string>
#include <vector>

#include "memfreq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return memfreq::cli::run_command(args, std::cout, std::cerr);
}
