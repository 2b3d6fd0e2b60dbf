#include <iostream>
#include <string>
#include <vector>

#include "owaqc/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return owaqc::cli::run(args, std::cout, std::cerr);
}
