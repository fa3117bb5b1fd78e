// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_ERRORS_HPP_
#define SCALEGUARD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace scaleguard {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed a value outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two images that must agree on geometry do not.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Filesystem failure: missing file, unreadable, unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// File is readable but is not a format (or variant) we decode.
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

// Header or payload is malformed or truncated.
class CorruptImage : public Error {
 public:
  using Error::Error;
};

// An EmbedPlan violates its invariants.
class PlanError : public Error {
 public:
  using Error::Error;
};

// Bench configuration document is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scaleguard

#endif  // SCALEGUARD_ERRORS_HPP_
