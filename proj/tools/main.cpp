#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return defeig::cli::run(argc, argv, std::cout, std::cerr); }
