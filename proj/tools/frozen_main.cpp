#include <iostream>

#include "frozen/cli.hpp"

int main(int argc, char** argv) { return frozen::cli::run(argc, argv, std::cout, std::cerr); }
