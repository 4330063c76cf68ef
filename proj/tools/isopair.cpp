#include <iostream>
#include <string>
#include <vector>

#include "isopair/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return isopair::run_command(args, std::cout, std::cerr);
}
