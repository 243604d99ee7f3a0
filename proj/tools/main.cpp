#include <iostream>

#include "cagm/cli.hpp"

int main(int argc, char** argv) { return cagm::cli::run(argc, argv, std::cout, std::cerr); }
