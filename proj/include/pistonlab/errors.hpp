#pragma once

#include <stdexcept>
#include <string>

namespace pistonlab {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on user input was violated (nonpositive length, bad ceiling, ...).
class invalid_input : public error {
public:
    explicit invalid_input(const std::string& what) : error(what) {}
};

/// A root finder or iteration failed to converge; carries the offending bracket.
class numerical_failure : public error {
public:
    numerical_failure(const std::string& what, double bracket_lo, double bracket_hi)
        : error(what), bracket_lo(bracket_lo), bracket_hi(bracket_hi) {}
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// The enumerated spectrum does not reach far enough for the requested cutoff;
/// names the ceiling that would suffice.
class insufficient_spectrum : public error {
public:
    insufficient_spectrum(const std::string& what, double required_omega_max)
        : error(what), required_omega_max(required_omega_max) {}
    double required_omega_max = 0.0;
};

/// An enumeration would exceed the configured mode-count budget.
class resource_limit : public error {
public:
    resource_limit(const std::string& what, double estimated, double budget)
        : error(what), estimated(estimated), budget(budget) {}
    double estimated = 0.0;
    double budget = 0.0;
};

/// An asymptotic fit is too ill-conditioned or too poorly resolved to trust.
class unreliable_fit : public error {
public:
    unreliable_fit(const std::string& what, double condition, double residual)
        : error(what), condition(condition), residual(residual) {}
    double condition = 0.0;
    double residual = 0.0;
};

/// The extracted finite part moved too much when the fit window was varied.
class fit_instability : public error {
public:
    fit_instability(const std::string& what, double window_gap)
        : error(what), window_gap(window_gap) {}
    double window_gap = 0.0;
};

} // namespace pistonlab
