// chatmood executable: thin shell around run_cli.
#include <unistd.h>

#include <iostream>
#include <string>
#include <vector>

#include "chatmood/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  chatmood::CliStreams streams{std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) == 1};
  return chatmood::run_cli(args, streams);
}
