#include <iostream>

#include "gaugedyn/cli.hpp"

int main(int argc, char** argv) { return gaugedyn::cli::main_entry(argc, argv, std::cout, std::cerr); }
