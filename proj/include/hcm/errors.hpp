#pragma once

#include <stdexcept>
#include <string>

namespace hcm {

// Malformed input or violated precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested genus is below the range where the invariant-theoretic model is faithful.
class UnstableRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A perturbation series failed to terminate within its iteration bound.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hcm
