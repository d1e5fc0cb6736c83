#include <iostream>

#include "optistop/cli.hpp"

int main(int argc, char** argv) { return optistop::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
