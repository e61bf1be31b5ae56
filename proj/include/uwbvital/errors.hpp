#pragma once

#include <stdexcept>
#include <string>

namespace uwbvital {

// Common base so the CLI can map library failures onto exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Empty or shape-incompatible matrix input.
struct DimensionError : Error {
    using Error::Error;
};

// Non-finite or otherwise invalid data values.
struct InputError : Error {
    using Error::Error;
};

// Scalar parameter outside its domain.
struct ParameterError : Error {
    using Error::Error;
};

// Rectangle or index out of range.
struct BoundsError : Error {
    using Error::Error;
};

// Configuration incompatible with the data it is applied to
// (degenerate CFAR window, empty frequency band, bad config file line).
struct ConfigurationError : Error {
    using Error::Error;
};

// Violations of an on-disk format (magic, version, payload length).
struct FormatError : Error {
    using Error::Error;
};

// Internal correctness gate tripped (benchmark backend mismatch).
struct GateError : Error {
    using Error::Error;
};

} // namespace uwbvital
