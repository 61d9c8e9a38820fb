#include <iostream>

#include "xformplay/session_io/cli.hpp"

int main(int argc, char** argv) { return xformplay::io::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
