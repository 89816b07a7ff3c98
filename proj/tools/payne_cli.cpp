#include <iostream>

#include "payne/runner.hpp"

int main(int argc, char** argv) { return payne::run_command(argc, argv, std::cout, std::cerr); }
