// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "scaleguard/cli.hpp"

int main(int argc, char** argv) {
  return scaleguard::cli::run(argc, argv, std::cout, std::cerr);
}
