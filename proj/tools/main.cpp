#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return spa::cli::run(argc, argv, std::cout, std::cerr); }
