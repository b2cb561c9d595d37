#include <iostream>

#include "iumps/cli.hpp"

int main(int argc, char** argv) { return iumps::cli::run(argc, argv, std::cout, std::cerr); }
