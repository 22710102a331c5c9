#include "dynmand/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return dynmand::run_cli(argc, argv, std::cout, std::cerr);
}
