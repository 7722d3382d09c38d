#include "twaff/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return twaff::run_cli(argc, argv, std::cout, std::cerr); }
