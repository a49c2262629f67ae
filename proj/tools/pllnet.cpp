#include <iostream>

#include "pllnet/cli/app.hpp"

int main(int argc, char** argv) { return pllnet::cli::run_cli(argc, argv, std::cout, std::cerr); }
