#include "placid/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return placid::cli::run(argc, argv, std::cout, std::cerr); }
