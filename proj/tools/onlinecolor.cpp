#include <iostream>

#include "onlinecolor/cli.hpp"

int main(int argc, char** argv) { return onlinecolor::cli::run_cli(argc, argv, std::cout, std::cerr); }
