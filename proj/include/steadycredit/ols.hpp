#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "error.hpp"

namespace steadycredit::ols {

/// Simple linear regression y = beta1 + beta2 * x.
///
/// Two residual scales are kept apart: `sigma_resid` is the RMS residual over n
/// and `s_resid` over n - 1. The coefficient standard errors use the usual
/// n - 2 denominator.
struct OlsFit {
    std::size_t n = 0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double sigma_intercept = 0.0;
    double sigma_slope = 0.0;
    double x_intercept = 0.0;  // -beta1 / beta2; NaN for a flat line
    double r = 0.0;
    double r2 = 0.0;
    double sigma_resid = 0.0;
    double s_resid = 0.0;
};

inline OlsFit fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(ErrorKind::Domain, "ols: x and y lengths differ (" + std::to_string(x.size()) + " vs " +
                                           std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 3) throw Error(ErrorKind::Domain, "ols: need at least 3 points, got " + std::to_string(n));

    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - xbar, dy = y[i] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::Domain, "ols: x is constant (zero variance)");

    OlsFit f;
    f.n = n;
    f.beta2 = sxy / sxx;
    f.beta1 = ybar - f.beta2 * xbar;
    f.x_intercept = f.beta2 != 0.0 ? -f.beta1 / f.beta2 : std::nan("");
    // Flat y: the correlation is undefined, report 0.
    f.r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
    if (f.r > 1.0) f.r = 1.0;
    if (f.r < -1.0) f.r = -1.0;
    f.r2 = f.r * f.r;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - f.beta1 - f.beta2 * x[i];
        sse += e * e;
    }
    const double nd = static_cast<double>(n);
    f.sigma_resid = std::sqrt(sse / nd);
    f.s_resid = std::sqrt(sse / (nd - 1.0));
    const double s_ols = std::sqrt(sse / (nd - 2.0));
    f.sigma_slope = s_ols / std::sqrt(sxx);
    f.sigma_intercept = s_ols * std::sqrt(1.0 / nd + xbar * xbar / sxx);
    return f;
}

inline double predict(const OlsFit& fit, double x) { return fit.beta1 + fit.beta2 * x; }

}  // namespace steadycredit::ols
