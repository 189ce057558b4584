// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#include <iostream>
#include <string>
#include <vector>

#include "pwz_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pwz::cli::run(args, std::cout, std::cerr);
}
