#include <iostream>

#include "sghb/cli.hpp"

int main(int argc, char** argv) { return sghb::cli::run_cli(argc, argv, std::cout, std::cerr); }
