#include <iostream>

#include "contractivity/cli.hpp"

int main(int argc, char** argv) {
  return contractivity::run_cli(argc, argv, std::cout, std::cerr);
}
