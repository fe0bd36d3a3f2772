#include <iostream>

#include "bfmeta/cli.hpp"

int main(int argc, char** argv) { return bfmeta::cli::run(argc, argv, std::cout, std::cerr); }
