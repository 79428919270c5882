#include <iostream>

#include "cconv/cli.hpp"

int main(int argc, char** argv) { return cconv::cli::main(argc, argv, std::cout, std::cerr); }
