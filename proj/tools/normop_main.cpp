#include <iostream>
#include <string>
#include <vector>

#include "normop/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return normop::cli::run(args, std::cout, std::cerr);
}
