#pragma once

// Small numeric helpers shared across modules: compensated summation for
// long reductions whose terms nearly cancel, and input-finiteness guards.

#include <cmath>
#include <complex>
#include <span>
#include <string>

#include "qburgers/errors.hpp"

namespace qburgers {

/// Neumaier (improved Kahan) compensated sum.  Error is O(eps)*|sum| +
/// O(n*eps^2)*sum|x|, i.e. effectively exact for our vector lengths.
inline double neumaier_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

inline double neumaier_mean(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("mean of empty vector");
    return neumaier_sum(xs) / static_cast<double>(xs.size());
}

/// Throws NumericGuardError if any entry is NaN or infinite.
inline void require_finite(std::span<const double> xs, const std::string& name) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!std::isfinite(xs[i]))
            throw NumericGuardError(name + ": non-finite value at index " + std::to_string(i));
}

inline void require_finite(std::span<const std::complex<double>> xs, const std::string& name) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!std::isfinite(xs[i].real()) || !std::isfinite(xs[i].imag()))
            throw NumericGuardError(name + ": non-finite value at index " + std::to_string(i));
}

/// ln(x)^p clamped at zero, the form every asymptotic cost factor uses;
/// keeps small arguments from injecting negative or complex garbage.
inline double log_pow(double x, double p) {
    const double l = std::log(x);
    return l <= 0.0 ? 0.0 : std::pow(l, p);
}

} // namespace qburgers
