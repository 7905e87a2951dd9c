#include <iostream>

#include "mmb/cli.hpp"

int main(int argc, char** argv) { return mmb::cli::run_cli(argc, argv, std::cout, std::cerr); }
