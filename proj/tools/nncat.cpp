#include <iostream>

#include <nncat/cli.hpp>

int main(int argc, char** argv) { return nncat::cli::run(argc, argv, std::cout, std::cerr); }
