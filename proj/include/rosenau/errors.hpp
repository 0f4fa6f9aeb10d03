#pragma once

#include <stdexcept>
#include <string>

namespace rosenau {

/// Base of every numerical failure raised by the library. Invalid caller
/// input is reported with std::invalid_argument instead.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridTooSmall : NumericalError {
    using NumericalError::NumericalError;
};

struct SymmetryError : NumericalError {
    using NumericalError::NumericalError;
};

struct UnsupportedMoment : NumericalError {
    using NumericalError::NumericalError;
};

struct UnsupportedKernel : NumericalError {
    using NumericalError::NumericalError;
};

struct UndefinedNorm : NumericalError {
    using NumericalError::NumericalError;
};

struct UndefinedFunctional : NumericalError {
    using NumericalError::NumericalError;
};

struct TailDominated : NumericalError {
    using NumericalError::NumericalError;
};

struct DivergentIntegral : NumericalError {
    using NumericalError::NumericalError;
};

struct ResampleError : NumericalError {
    using NumericalError::NumericalError;
};

struct InfiniteDistance : NumericalError {
    using NumericalError::NumericalError;
};

struct InvalidData : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace rosenau
