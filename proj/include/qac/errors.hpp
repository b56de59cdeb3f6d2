#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qac {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

// Bad arguments, underdetermined fits, enumeration limits.
class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "input"; }
};

class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double node)
        : Error(what), node(node) {}
    const char* kind() const noexcept override { return "evaluation"; }
    double node;
};

class BracketError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "bracket"; }
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> last,
                        double residual, int iterations)
        : Error(what), last(std::move(last)), residual(residual),
          iterations(iterations) {}
    const char* kind() const noexcept override { return "non-convergence"; }
    std::vector<double> last;
    double residual;
    int iterations;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int iterations)
        : Error(what), iterations(iterations) {}
    const char* kind() const noexcept override { return "divergence"; }
    int iterations;
};

class NotFoundError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "not-found"; }
};

// A tracked free-energy minimum vanished; last_valid_Gamma is the last
// field value at which it was still resolved.
class SpinodalError : public Error {
public:
    SpinodalError(const std::string& what, double last_valid_Gamma)
        : Error(what), last_valid_Gamma(last_valid_Gamma) {}
    const char* kind() const noexcept override { return "spinodal"; }
    double last_valid_Gamma;
};

class ReplicaBreakdownError : public Error {
public:
    ReplicaBreakdownError(const std::string& what, double C)
        : Error(what), C(C) {}
    const char* kind() const noexcept override { return "replica-breakdown"; }
    double C;
};

class PrecisionError : public Error {
public:
    PrecisionError(const std::string& what, int N) : Error(what), N(N) {}
    const char* kind() const noexcept override { return "precision"; }
    int N;
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

} // namespace qac
