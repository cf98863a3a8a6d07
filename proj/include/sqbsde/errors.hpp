// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqbsde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sampled profile was evaluated beyond its last node.
class ExtrapolationError : public Error {
public:
    using Error::Error;
};

/// The numeric Legendre transform failed to bracket a maximizer.
class UnboundedConjugateError : public Error {
public:
    using Error::Error;
};

class NotSuperquadraticError : public Error {
public:
    using Error::Error;
};

/// The terminal condition carries no modulus of continuity.
class NoModulusError : public Error {
public:
    using Error::Error;
};

class SimulationDivergedError : public Error {
public:
    SimulationDivergedError(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class NotGaussianError : public Error {
public:
    using Error::Error;
};

/// Spatial domain too small for the requested evaluation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Time or space resolution insufficient (CFL ceiling, geometric mesh, ...).
class ResolutionError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Floating-point range exceeded while building a sequence.
class RangeError : public Error {
public:
    RangeError(const std::string& what, std::size_t max_feasible)
        : Error(what), max_feasible_(max_feasible) {}
    std::size_t max_feasible() const noexcept { return max_feasible_; }

private:
    std::size_t max_feasible_;
};

class NoFitError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sqbsde
