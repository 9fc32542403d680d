#pragma once

#include <stdexcept>
#include <string>

namespace censornet {

/// Bad generative/experiment configuration (CLI exit code 1).
struct invalid_config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad runtime input to an operation (CLI exit code 2).
struct invalid_input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fit cannot produce residual degrees of freedom (CLI exit code 2).
struct degenerate_fit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File or stream failure (CLI exit code 3).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stable short code used in replication records and logs.
inline std::string error_code(const std::exception& e) {
  if (dynamic_cast<const invalid_config_error*>(&e)) return "invalid_config";
  if (dynamic_cast<const invalid_input_error*>(&e)) return "invalid_input";
  if (dynamic_cast<const degenerate_fit_error*>(&e)) return "degenerate_fit";
  if (dynamic_cast<const io_error*>(&e)) return "io_error";
  return "error";
}

}  // namespace censornet
