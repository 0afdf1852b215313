#include <iostream>

#include "vibro/cli.hpp"

int main(int argc, char** argv) { return vibro::cli::run(argc, argv, std::cout, std::cerr); }
