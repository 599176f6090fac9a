#include <iostream>

#include "rcm/cli.hpp"

int main(int argc, char** argv) { return rcm::run_cli(argc, argv, std::cout, std::cerr); }
