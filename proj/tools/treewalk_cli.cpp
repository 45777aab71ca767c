#include <iostream>

#include "treewalk/cli.hpp"

int main(int argc, char** argv) { return treewalk::run_cli(argc, argv, std::cout, std::cerr); }
