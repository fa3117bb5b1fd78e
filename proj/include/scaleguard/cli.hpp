// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_CLI_HPP_
#define SCALEGUARD_CLI_HPP_

#include <iosfwd>

namespace scaleguard::cli {

// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,         // bad flags, bad values, dimension mismatch
  kIo = 2,            // unreadable or unwritable files, bad image data
  kPlan = 3,          // embed plan invariant violated
  kAttackDetected = 4,
  kMismatch = 5,      // verify: reveal is not bit-identical
};

// Runs one invocation. Records go to `out` (JSON lines), diagnostics and
// usage text to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scaleguard::cli

#endif  // SCALEGUARD_CLI_HPP_
