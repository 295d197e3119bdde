#include <iostream>
#include <string>
#include <vector>

#include "copytrace/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return copytrace::run_cli(args, std::cout, std::cerr);
}
