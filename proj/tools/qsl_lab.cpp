#include <iostream>

#include "qsl/cli.hpp"

int main(int argc, char** argv) { return qsl::cli::main(argc, argv, std::cout, std::cerr); }
