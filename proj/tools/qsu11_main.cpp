#include <iostream>
#include <vector>

#include "qsu11/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qsu11::run_cli(args, std::cout, std::cerr);
}
