#include <iostream>
#include <string>
#include <vector>

#include "greenkernel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return greenkernel::dispatch(args, std::cout, std::cerr);
}
