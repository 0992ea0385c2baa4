#include <iostream>

#include "cyclesim/cli.hpp"

int main(int argc, char** argv) {
  return cyclesim::run_cli(argc, argv, std::cout, std::cerr);
}
