#include "fuller/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return fuller::run_cli(argc, argv, std::cout, std::cerr);
}
