#include <iostream>

#include "treering/cli.hpp"

int main(int argc, char** argv) { return treering::run_cli(argc, argv, std::cout, std::cerr); }
