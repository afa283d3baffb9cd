#include <iostream>

#include "illum/cli.hpp"

int main(int argc, char** argv) { return illum::cli::run(argc, argv, std::cout, std::cerr); }
