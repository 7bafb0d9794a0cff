#include <iostream>
#include <string>
#include <vector>

#include "trigibbs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return trigibbs::cli_dispatch(std::move(args), std::cout, std::cerr);
}
