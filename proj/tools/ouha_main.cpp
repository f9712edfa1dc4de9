#include <iostream>

#include "ouha/cli.hpp"

int main(int argc, char** argv) { return ouha::cli::run(argc, argv, std::cout, std::cerr); }
