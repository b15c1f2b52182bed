#include <iostream>
#include <string>
#include <vector>

#include "cbch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cbch::cli::run(args, std::cout, std::cerr);
}
