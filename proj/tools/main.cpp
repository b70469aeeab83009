#include <iostream>

#include "skybench/cli.hpp"

int main(int argc, char** argv) { return skybench::cli::main_entry(argc, argv, std::cout, std::cerr); }
