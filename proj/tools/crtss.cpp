#include <iostream>
#include <string>
#include <vector>

#include "crtss/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return crtss::cli::run(args, std::cout, std::cerr);
}
