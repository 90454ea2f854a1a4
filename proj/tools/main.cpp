#include <iostream>

#include "nudgek/cli.hpp"

int main(int argc, char** argv) { return nudgek::cli::run(argc, argv, std::cout, std::cerr); }
