#pragma once

#include <stdexcept>
#include <string>

namespace gaugesep {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied inconsistent data (dimension mismatch, violated precondition).
class InputError : public Error {
public:
    using Error::Error;
};

/// A construction collapsed (zero functional, anchor inside the subspace, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// The convex set has no points.
class EmptySetError : public Error {
public:
    using Error::Error;
};

/// Numerical solver failure (LP breakdown, iteration cap, certificate mismatch).
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace gaugesep
