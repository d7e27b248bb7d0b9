#pragma once

#include <stdexcept>
#include <string>

namespace fusion {

// Bad input: malformed or out-of-domain arguments. Maps to exit code 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computed object contradicts a structural identity it must satisfy,
// e.g. a quotient whose dimension is not the product of the entries.
// Maps to exit code 3.
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fusion
