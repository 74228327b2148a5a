#include <iostream>

#include "segmeter/cli.hpp"

int main(int argc, char** argv) { return segmeter::run_cli(argc, argv, std::cout, std::cerr); }
