#include <iostream>

#include "slicemax/cli.hpp"

int main(int argc, char** argv) { return slicemax::cli::run(argc, argv, std::cout, std::cerr); }
