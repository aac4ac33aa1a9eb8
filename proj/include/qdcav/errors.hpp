#pragma once

#include <stdexcept>
#include <string>

namespace qdcav {

// Raised when a numerical procedure (fit, normalization) cannot produce a
// meaningful result for otherwise well-formed input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FitFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qdcav
