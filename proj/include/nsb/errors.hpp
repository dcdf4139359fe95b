#pragma once

#include <stdexcept>

namespace nsb {

// Failure classes mapped to process exit codes by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nsb
