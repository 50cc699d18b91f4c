#include <iostream>
#include <string>
#include <vector>

#include "apfree/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> args(argv, argv + argc);
  const int code = apfree::cli::dispatch(args, std::cin, std::cout, std::cerr);
  std::cout.flush();
  return code;
}
