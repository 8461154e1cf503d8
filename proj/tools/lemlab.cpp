#include <iostream>

#include "lemlab/cli.hpp"

int main(int argc, char** argv) { return lemlab::cli::run(argc, argv, std::cout, std::cerr); }
