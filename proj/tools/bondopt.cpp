#include <iostream>
#include <string>
#include <vector>

#include "bondopt/app/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bondopt::app::run_cli(args, std::cout, std::cerr);
}
