#include <iostream>
#include <string>
#include <vector>

#include "k3mds/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  k3mds::cli::Report rep = k3mds::cli::run(args);
  std::cout << rep.text;
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  return rep.exit_code;
}
