// SPDX-License-Identifier: Apache-2.0
#include "curate/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return curate::cli::run(args);
}
