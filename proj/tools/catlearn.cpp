#include <iostream>

#include "catlearn/cli/cli.hpp"

int main(int argc, char** argv) { return catlearn::cli::runCli(argc, argv, std::cout, std::cerr); }
