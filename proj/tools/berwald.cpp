#include <iostream>

#include "berwald/cli/commands.hpp"

int main(int argc, char** argv) { return berwald::cli::run_cli(argc, argv, std::cout, std::cerr); }
