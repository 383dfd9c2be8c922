#pragma once

#include <cmath>
#include <limits>

#include "error.hpp"

namespace steadycredit::special {

namespace detail {

inline constexpr int kMaxIter = 1000;
inline constexpr double kEps = 1e-16;

// P(a, x) by its power series; converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by its continued fraction (modified Lentz); for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw Error(ErrorKind::Domain, "gamma_q: a must be > 0");
    if (!(x >= 0.0)) throw Error(ErrorKind::Domain, "gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_fraction(a, x);
}

/// Upper-tail probability of the chi-squared distribution.
inline double chi2_sf(double chi2, int dof) {
    if (dof < 1) throw Error(ErrorKind::Domain, "chi2 p-value: dof must be >= 1");
    if (!(chi2 >= 0.0)) throw Error(ErrorKind::Domain, "chi2 p-value: statistic must be >= 0");
    return gamma_q(0.5 * dof, 0.5 * chi2);
}

}  // namespace steadycredit::special
