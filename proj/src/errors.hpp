#pragma once

#include <stdexcept>
#include <string>

namespace qfal {

// Malformed input bytes or files (bad magic, bad header, bad checkpoint).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input ended before the declared payload was complete.
struct TruncatedError : FormatError {
  using FormatError::FormatError;
};

// Filesystem-level failures (missing file, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent or unsatisfiable run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qfal
