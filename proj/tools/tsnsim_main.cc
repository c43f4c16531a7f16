#include <iostream>

#include "tsnsim/cli.h"

int main(int argc, char** argv) {
  return tsnsim::run_cli(argc, argv, std::cout, std::cerr);
}
