#include <iostream>

#include "oraclekit/cli.hpp"

int main(int argc, char** argv) { return oraclekit::run_command(argc, argv, std::cout, std::cerr); }
