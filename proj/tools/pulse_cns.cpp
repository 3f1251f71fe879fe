#include <iostream>

#include "pcns/cli.hpp"

int main(int argc, char** argv) { return pcns::cli_main(argc, argv, std::cout, std::cerr); }
