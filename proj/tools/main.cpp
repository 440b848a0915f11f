#include <iostream>
#include <string>
#include <vector>

#include "app.hpp"

int main(int argc, char **argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return ifdiv::app::run_command(args, std::cout, std::cerr);
}
