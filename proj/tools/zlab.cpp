#include "zlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return zlab::cli::run(argc, argv, std::cout, std::cerr); }
