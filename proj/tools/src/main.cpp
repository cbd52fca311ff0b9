#include <iostream>
#include <string>
#include <vector>

#include "refint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return refint::cli::run(args, std::cout, std::cerr);
}
