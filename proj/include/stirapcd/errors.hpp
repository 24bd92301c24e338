#pragma once

#include <stdexcept>
#include <string>

namespace stirapcd {

// Base class for all stirapcd exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid input: malformed files, unknown labels, inconsistent
// configuration, out-of-range physical parameters.
struct DataError : Error {
  using Error::Error;
};

// Numerical failure during time propagation (e.g. the norm-conservation
// guard tripped because the step size is too coarse for the problem).
struct IntegrationError : Error {
  using Error::Error;
};

}  // namespace stirapcd
