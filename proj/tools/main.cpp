#include <iostream>

#include "imagearc/cli.hpp"

int main(int argc, char** argv) { return imagearc::cli::run(argc, argv, std::cout, std::cerr); }
