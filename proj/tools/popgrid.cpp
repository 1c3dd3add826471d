#include <iostream>
#include <string>
#include <vector>

#include "popgrid/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return popgrid::cli::main(args, std::cout, std::cerr);
}
