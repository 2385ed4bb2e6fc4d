#pragma once

#include <stdexcept>
#include <string>

namespace qpr {

// Base for all library errors that the CLI maps to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: malformed config, model invariant violations, resonant frequency
// vectors. CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// Runtime failure while constructing a solution: enumeration budget overruns,
// divergent outer iterations, unstable integration. CLI exit code 3.
struct SolverError : Error {
    using Error::Error;
};

// A cross-check that should hold for a correct construction failed
// (series-vs-tree mismatch, combinatorial bound violation). CLI exit code 4.
struct VerificationError : Error {
    using Error::Error;
};

}  // namespace qpr
