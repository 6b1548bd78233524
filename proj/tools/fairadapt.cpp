#include <iostream>
#include <string>
#include <vector>

#include "fairadapt/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fairadapt::cli::run_cli(args, std::cout, std::cerr);
}
