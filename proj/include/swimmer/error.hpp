#pragma once

#include <stdexcept>
#include <string>

namespace swimmer {

enum class ErrorKind {
    Validation,  // bad parameters or configuration
    Numerical,   // singular solve, non-finite values
    Solver,      // iterative method failed to converge
    Io,
};

// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::Solver: return "solver";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

[[noreturn]] inline void fail_validation(const std::string& message) {
    throw Error(ErrorKind::Validation, message);
}

}  // namespace swimmer
