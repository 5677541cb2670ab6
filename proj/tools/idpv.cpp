#include <iostream>

#include "idpv/cli.hpp"

int main(int argc, char** argv) { return idpv::cli_main(argc, argv, std::cout, std::cerr); }
