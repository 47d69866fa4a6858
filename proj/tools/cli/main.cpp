#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return ratelab::cli::run_main(argc, argv, std::cout, std::cerr); }
