// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace uwchan {

// Invalid inputs (bad shapes, out-of-range parameters) throw
// std::invalid_argument directly.

/// Numerical failure: NaN loss, non-finite gradient, singular solve.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed on-disk artifact (bad magic, version, truncation).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure (unwritable path, missing file).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad run configuration (unknown preset, malformed config file).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uwchan
