#include <iostream>

#include "kronlab_cli.hpp"

int main(int argc, char** argv) { return kronlab::cli::run(argc, argv, std::cout, std::cerr); }
