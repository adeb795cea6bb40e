#include <iostream>

#include "sgfs_cli/commands.hpp"

int main(int argc, char** argv) { return sgfs::cli::run(argc, argv, std::cout, std::cerr); }
