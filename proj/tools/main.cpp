#include <iostream>

#include "depforge/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return depforge::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
