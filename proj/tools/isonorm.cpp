#include <iostream>

#include "isonorm/cli.hpp"

int main(int argc, char** argv) { return isonorm::run(argc, argv, std::cout, std::cerr); }
