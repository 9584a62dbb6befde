#include <iostream>
#include <string>
#include <vector>

#include "modweave/frontage/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modweave::run_cli(args, std::cout, std::cerr, std::cin);
}
