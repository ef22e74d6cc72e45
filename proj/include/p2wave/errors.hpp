#pragma once

#include <stdexcept>
#include <string>

namespace p2wave {

// Bad input: wrong sizes, out-of-range parameters, violated preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Factorization breakdown, eigen-solver non-convergence, pole hits.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace p2wave
