#include "smcbf/app/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return smcbf::app::run_cli(argc, argv, std::cout, std::cerr); }
