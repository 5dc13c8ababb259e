#include <iostream>
#include <string>
#include <vector>

#include "sumlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sumlab::run_cli(args, std::cout, std::cerr);
}
