#include <iostream>

#include "optbin/cli.hpp"

int main(int argc, char** argv) { return optbin::run_cli(argc, argv, std::cout, std::cerr); }
