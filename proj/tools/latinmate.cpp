#include <iostream>
#include <string>
#include <vector>

#include "latinmate/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return latinmate::cli::run(args, std::cout, std::cerr);
}
