// Error hierarchy for the defo library.
//
// Three families, matching the CLI exit-code contract:
//   - MathCheckError: a mathematical property that was supposed to hold did
//     not (an axiom check, a postcondition, a claimed identity).  Exit 1.
//   - InputError: malformed or inconsistent user input.  Exit 2.
//   - ResourceError: a configured budget (degree cap, S-pair budget) was
//     exhausted before the computation finished.  Exit 2.
#pragma once

#include <stdexcept>
#include <string>

namespace defo {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical check failed: invariant, axiom, or postcondition.
class MathCheckError : public Error {
public:
    explicit MathCheckError(const std::string& what) : Error(what) {}
};

// Bad input: unreadable file, inconsistent dimensions, unknown key, ...
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

// A computation hit a configured budget.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(what) {}
};

// Polynomial-degree cap exceeded (forms / series arithmetic).
class DegreeBudgetExceeded : public ResourceError {
public:
    explicit DegreeBudgetExceeded(const std::string& what) : ResourceError(what) {}
};

// Exact polynomial division was requested but the dividend is not a
// multiple of the divisor.  Raised loudly: several constructions rely on
// divisibility that is a stated identity, and a failure here means the
// identity does not hold for the given input.
class NotDivisible : public MathCheckError {
public:
    explicit NotDivisible(const std::string& what) : MathCheckError(what) {}
};

// A map presented as a differential does not square to zero.
class NotADifferential : public MathCheckError {
public:
    explicit NotADifferential(const std::string& what) : MathCheckError(what) {}
};

} // namespace defo
