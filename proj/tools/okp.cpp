#include <iostream>

#include "okp/cli.hpp"

int main(int argc, char** argv) { return okp::cli::run(argc, argv, std::cout, std::cerr); }
