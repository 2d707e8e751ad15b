#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nmchain {

// Base class for all toolkit errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The Krylov residual vanished before the full chain was built: the start
// vector spans an invariant subspace smaller than the bath. The shorter
// chain of `effective_length` modes is the correct reduced model.
class breakdown_error : public error {
public:
    breakdown_error(std::size_t effective_length, const std::string& what)
        : error(what), effective_length_(effective_length) {}
    std::size_t effective_length() const noexcept { return effective_length_; }

private:
    std::size_t effective_length_;
};

// Two oscillator frequencies coincide within tolerance, so the closed-form
// sine-sum representation is singular. Callers fall back to quadrature.
class near_degenerate_error : public error {
public:
    using error::error;
};

// The resolvent frequencies are not both real: the coupling exceeds the
// product of the tracer and first-mode frequencies and the closed-form
// oscillatory solution does not exist.
class multivalued_error : public error {
public:
    using error::error;
};

// The two resolvent frequencies coincide; the confluent kernel form is not
// implemented and the caller must use the Volterra or ODE paths.
class degenerate_resolvent_error : public error {
public:
    using error::error;
};

class dimension_error : public error {
public:
    using error::error;
};

// A trajectory or intermediate value exceeded the runaway threshold.
class instability_error : public error {
public:
    using error::error;
};

} // namespace nmchain
