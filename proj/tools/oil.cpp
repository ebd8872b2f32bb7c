#include "oil/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return oil::run_cli(argc, argv, std::cout, std::cerr); }
