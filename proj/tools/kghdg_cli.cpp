#include <iostream>

#include "kghdg/cli.hpp"

int main(int argc, char** argv) { return kghdg::cli::run(argc, argv, std::cout, std::cerr); }
