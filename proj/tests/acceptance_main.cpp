#include <iostream>

#include "pllnet/cli/verify.hpp"

int main() { return pllnet::acceptance::run_acceptance(std::cout) ? 0 : 1; }
