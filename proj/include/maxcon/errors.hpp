// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_ERRORS_HPP
#define MAXCON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace maxcon {

/// Base class for all errors raised by the solver stack.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A fractional residual was evaluated outside its domain (c'theta - d0 <= 0).
class DomainViolation : public SolverError {
public:
    explicit DomainViolation(const std::string& msg) : SolverError(msg) {}
};

/// No model satisfies c'theta - d0 > 0 for every datum of a fractional subset.
class DomainEmpty : public SolverError {
public:
    explicit DomainEmpty(const std::string& msg) : SolverError(msg) {}
};

/// The forced set of a constrained minimax problem is jointly infeasible.
class ConstraintsInfeasible : public SolverError {
public:
    explicit ConstraintsInfeasible(const std::string& msg) : SolverError(msg) {}
};

/// An oracle enumeration would exceed its desk-scale guard.
class InstanceTooLarge : public SolverError {
public:
    explicit InstanceTooLarge(const std::string& msg) : SolverError(msg) {}
};

/// Instance file could not be parsed; message names the offending field.
class ParseError : public SolverError {
public:
    explicit ParseError(const std::string& msg) : SolverError(msg) {}
};

/// Instance file contents disagree with the declared dimensions.
class DimensionMismatch : public SolverError {
public:
    explicit DimensionMismatch(const std::string& msg) : SolverError(msg) {}
};

}  // namespace maxcon

#endif  // MAXCON_ERRORS_HPP
