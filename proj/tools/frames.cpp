#include <iostream>

#include <cyclic_frames/cli.hpp>

int main(int argc, char** argv) { return cyclic_frames::cli::run(argc, argv, std::cout, std::cerr); }
