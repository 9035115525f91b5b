#pragma once

#include <stdexcept>

namespace oemsim {

/// Input data or configuration violates a documented precondition.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce an acceptable result.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem or serialization failure; messages include the path.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace oemsim
