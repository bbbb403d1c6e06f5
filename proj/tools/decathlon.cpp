#include "decathlon/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return decathlon::run_cli(argc, argv, std::cout, std::cerr); }
