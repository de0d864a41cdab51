#include <iostream>

#include "specdist/cli.hpp"

int main(int argc, char** argv) {
  return specdist::run_cli(argc, argv, std::cout, std::cerr);
}
