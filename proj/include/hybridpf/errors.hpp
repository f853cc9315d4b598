#pragma once

#include <stdexcept>

namespace hybridpf {

/// Invalid configuration or model specification.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable, malformed, or non-finite input data.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown at run time (weight underflow, non-finite states).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hybridpf
