#include <iostream>

#include "galdef/cli.hpp"

int main(int argc, char** argv) { return galdef::cli::run(argc, argv, std::cout, std::cerr); }
