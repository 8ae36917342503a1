#include <iostream>
#include <string>
#include <vector>

#include "pacmarl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pacmarl::cli::run(args, std::cout, std::cerr);
}
