#pragma once

#include <stdexcept>
#include <string>

namespace ainsim {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument to a library operation (bad dimension, negative variance, ...).
struct ArgumentError : Error {
    using Error::Error;
};

/// Antenna count the construction does not support (M not a multiple of 4).
struct UnsupportedDimensionError : ArgumentError {
    using ArgumentError::ArgumentError;
};

/// A channel matrix required to be invertible is numerically singular.
struct SingularChannelError : Error {
    using Error::Error;
};

/// A stacked receive matrix lost rank.
struct RankError : Error {
    using Error::Error;
};

/// Channel sampling kept producing singular matrices.
struct GenerationError : Error {
    using Error::Error;
};

/// A channel coefficient is exactly zero where the scheme divides by it.
struct DegenerateChannelError : Error {
    using Error::Error;
};

/// Constellation enumeration would exceed the tuple budget.
struct EnumerationBudgetError : Error {
    using Error::Error;
};

/// Bad experiment configuration (maps to CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Result file could not be written (maps to CLI exit code 3).
struct IoError : Error {
    using Error::Error;
};

}  // namespace ainsim
