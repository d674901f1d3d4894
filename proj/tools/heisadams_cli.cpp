#include <iostream>

#include "heisadams/cli.hpp"

int main(int argc, char** argv) { return heisadams::cli::main(argc, argv, std::cout, std::cerr); }
