#include <iostream>

#include "enforcekit/cli.hpp"

int main(int argc, char** argv) {
  return enforcekit::cli::main(argc, argv, std::cout, std::cerr);
}
