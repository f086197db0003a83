#pragma once

#include <stdexcept>
#include <string>

namespace mhc {

/// Invalid parameters or inputs (precondition violations). The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of a function.
class DomainError : public InputError {
public:
    using InputError::InputError;
};

/// A numerical routine could not reach its requested tolerance. Exit code 3 at the CLI.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

}  // namespace mhc
