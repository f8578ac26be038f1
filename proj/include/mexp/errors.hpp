#pragma once

#include <stdexcept>
#include <string>

namespace mexp {

/// Points or balls from different spaces were mixed.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The system lacks something the operation needs (inverse, Jacobian).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A ball list does not cover the space at the probed resolution.
class CoverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConstructionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Too few surviving samples to take a logarithm.
class InsufficientSamplesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown system, measure, case id or malformed configuration.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mexp
