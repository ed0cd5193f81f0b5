#ifndef HERDECON_ERRORS_HPP
#define HERDECON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace herdecon {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: out-of-range parameters, malformed documents, schema
// violations. CLI maps these to exit code 1.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Numerical failures: non-convergence, separation, rank deficiency.
// CLI maps these to exit code 2.
struct ComputationError : Error {
    explicit ComputationError(const std::string& msg) : Error(msg) {}
};

// Filesystem and parsing failures at the I/O boundary. Exit code 3.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace herdecon

#endif
