#include "swimmer/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return swimmer::run_cli(argc, argv, std::cout, std::cerr); }
