#pragma once

#include <stdexcept>
#include <string>

namespace elicit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an iterative routine cannot make progress: LP degeneracy,
// a version space too thin to cut, or a resampling cap being hit.
struct NumericalDegeneracyError : Error {
    using Error::Error;
};

// Raised for malformed or out-of-range experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace elicit
