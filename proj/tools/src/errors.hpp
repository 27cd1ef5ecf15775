#pragma once

#include <stdexcept>

#include "csketch/errors.hpp"

namespace csketch::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kNumericalError = 3,
  kCheckFailed = 4,
};

/// Bad flags, bad config values, or a forbidden output path.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A self-check measured something outside its tolerance.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csketch::cli
