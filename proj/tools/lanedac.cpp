#include <iostream>

#include "lanedac/cli.hpp"

int main(int argc, char** argv) { return lanedac::run_cli(argc, argv, std::cout, std::cerr); }
