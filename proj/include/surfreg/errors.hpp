#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace surfreg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid mesh request (resolution too small, index overflow).
class MeshError : public Error {
public:
    using Error::Error;
};

/// Two objects that must live on the same discretization do not.
class MismatchError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File could not be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A triangle of the immersion has (numerically) vanishing area.
class DegenerateElementError : public Error {
public:
    DegenerateElementError(std::size_t triangle, double det)
        : Error("degenerate element at triangle " + std::to_string(triangle) +
                " (det g = " + std::to_string(det) + ")"),
          triangle_(triangle) {}
    std::size_t triangle() const noexcept { return triangle_; }

private:
    std::size_t triangle_;
};

/// Iterative solve did not reach the requested residual.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Time integration failed at a given step (degenerate surface or failed solve).
class StepFailure : public Error {
public:
    StepFailure(int step, const std::string& cause)
        : Error("step " + std::to_string(step) + ": " + cause), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

/// Invalid argument to an algorithm (zero velocity where a direction is required, etc).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace surfreg
