#include <iostream>
#include <string>
#include <vector>

#include "dpis/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dpis::cli_dispatch(args, std::cout, std::cerr);
}
