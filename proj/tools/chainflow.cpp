#include <iostream>
#include <string>
#include <vector>

#include "chainflow/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chainflow::RunCli(args, std::cout, std::cerr);
}
