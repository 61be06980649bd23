#include <iostream>
#include <string>
#include <vector>

#include "palcanon/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return palcanon::cli_main(args, std::cout, std::cerr);
}
