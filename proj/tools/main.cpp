#include <iostream>
#include <string>
#include <vector>

#include "fieldtrend/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fieldtrend::run_cli(args, std::cout, std::cerr);
}
