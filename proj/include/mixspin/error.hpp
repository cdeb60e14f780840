#pragma once

#include <stdexcept>
#include <string>

namespace mixspin {

// Bad input: malformed values, violated preconditions. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine could not produce a result (no bracket, dimension cap, ...).
// The CLI maps this to exit code 3.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mixspin
