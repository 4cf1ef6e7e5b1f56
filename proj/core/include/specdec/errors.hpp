#pragma once

#include <stdexcept>
#include <string>

namespace specdec {

/// Invalid argument or ill-formed configuration (bad shapes, bad grid
/// bounds, parameters outside their admissible range).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative solver stopped without reaching its target accuracy.
/// Carries the last optimality residual and the iteration count.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, long iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}

    double residual;
    long iterations;
};

} // namespace specdec
