#include "stochlp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return stochlp::run_cli(argc, argv, std::cout, std::cerr); }
