#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gmod_cli.hpp"

int main(int argc, char** argv) {
  gmod::Environment env;
  const char* color = std::getenv("GMOD_COLOR");
  env.color = color ? std::strcmp(color, "0") != 0 : isatty(STDOUT_FILENO) != 0;
  std::vector<std::string> args(argv + 1, argv + argc);
  return gmod::run(args, std::cout, std::cerr, env);
}
