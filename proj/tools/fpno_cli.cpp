#include <iostream>

#include "fpno/cli/commands.hpp"

int main(int argc, char** argv) { return fpno::run_cli(argc, argv, std::cout, std::cerr); }
