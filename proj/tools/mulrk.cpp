#include "mulrk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mulrk::cli::main_entry(argc, argv, std::cout, std::cerr); }
