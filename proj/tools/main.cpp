#include <iostream>

#include "dprime/cli.hpp"

int main(int argc, char** argv) { return dprime::run_cli(argc, argv, std::cout, std::cerr); }
