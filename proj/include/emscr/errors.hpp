#pragma once

#include <stdexcept>

namespace emscr {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters detected while building code structures.
struct ConstructionError : Error {
    using Error::Error;
};

// A `prime` field spec whose modulus is not prime.
struct NotPrimeError : ConstructionError {
    using ConstructionError::ConstructionError;
};

// A binary field spec whose polynomial is not irreducible.
struct ReduciblePolynomialError : ConstructionError {
    using ConstructionError::ConstructionError;
};

// Exhausted the candidate list without finding a multiplicative generator.
struct GeneratorSearchError : ConstructionError {
    using ConstructionError::ConstructionError;
};

// Command-level misuse: bad flags, wrong failure count, conflicting state.
struct UsageError : Error {
    using Error::Error;
};

// Recovered or loaded data violates the code constraints.
struct IntegrityError : Error {
    using Error::Error;
};

// Persistence failures, split by cause so callers can tell them apart.
struct IoError : Error {
    using Error::Error;
};
struct MagicMismatchError : IoError {
    using IoError::IoError;
};
struct DigestMismatchError : IoError {
    using IoError::IoError;
};
struct TruncatedFileError : IoError {
    using IoError::IoError;
};

// A linear solve hit a singular matrix.
struct SingularMatrixError : Error {
    using Error::Error;
};

}  // namespace emscr
