#pragma once

// Independent reference computations for the tests. Nothing here calls into the
// library's numerical routines.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

/// Ordinary least squares by brute force: a square grid over (intercept, slope)
/// repeatedly zoomed onto its best node. The sum of squares is accumulated in
/// quad precision so that the objective still separates nodes 1e-12 apart.
/// The box recentres on the best node, doubles when that node sits on an edge,
/// and shrinks otherwise.
inline std::pair<double, double> ols_grid_oracle(const std::vector<double>& x, const std::vector<double>& y,
                                                 double tol = 1e-13) {
    using quad = __float128;
    auto sse = [&](quad a, quad b) {
        quad s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            quad e = quad(y[i]) - a - b * quad(x[i]);
            s += e * e;
        }
        return s;
    };
    constexpr int kSide = 10;  // nodes per side = 2 * kSide + 1
    quad ca = 0, cb = 0;
    double ha = 4.0, hb = 4.0;
    for (int iter = 0; iter < 10000 && (ha > tol || hb > tol); ++iter) {
        quad best = 0;
        bool first = true;
        int bi = 0, bj = 0;
        for (int i = -kSide; i <= kSide; ++i) {
            for (int j = -kSide; j <= kSide; ++j) {
                quad v = sse(ca + quad(ha) * i / kSide, cb + quad(hb) * j / kSide);
                if (first || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    first = false;
                }
            }
        }
        ca += quad(ha) * bi / kSide;
        cb += quad(hb) * bj / kSide;
        ha = std::abs(bi) == kSide ? ha * 2.0 : ha * 0.4;
        hb = std::abs(bj) == kSide ? hb * 2.0 : hb * 0.4;
    }
    return {static_cast<double>(ca), static_cast<double>(cb)};
}

/// Least-squares zeta by brute force: a coarse grid over [lo, hi] with the
/// given step, refined on a finer grid around the best coarse node.
inline double grid_search_zeta(const std::vector<double>& d, const std::vector<double>& f, double lo, double hi,
                               double step) {
    auto sse = [&](double z) {
        double s = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            double e = f[k] - (d[k] + z) / (1.0 - d[k]);
            s += e * e;
        }
        return s;
    };
    auto scan = [&](double a, double b, double h) {
        double best = std::numeric_limits<double>::infinity(), arg = a;
        long steps = std::lround((b - a) / h);
        for (long i = 0; i <= steps; ++i) {
            double z = a + h * static_cast<double>(i);
            double v = sse(z);
            if (v < best) {
                best = v;
                arg = z;
            }
        }
        return arg;
    };
    const double coarse = step * 1000.0;
    double c = scan(lo, hi, coarse);
    // Snap the refined window onto the fine lattice anchored at `lo`.
    double a = std::max(lo, c - coarse), b = std::min(hi, c + coarse);
    a = lo + step * std::floor((a - lo) / step);
    return scan(a, b, step);
}

/// F(s) = sum_k (a_1...a_k) s^k - n, evaluated term by term with std::pow.
inline double steady_state_equation(const std::vector<double>& a, double s) {
    double total = 0.0, cumulative = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        cumulative *= a[k];
        total += cumulative * std::pow(s, static_cast<double>(k + 1));
    }
    return total - static_cast<double>(a.size());
}

/// Plain bisection on (0, 10] down to the given bracket width.
inline double bisect_discount_factor(const std::vector<double>& a, double width) {
    double lo = 0.0, hi = 10.0;
    if (steady_state_equation(a, hi) < 0.0) throw std::runtime_error("oracle: no root below 10");
    while (hi - lo > width) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (steady_state_equation(a, mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> m, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[p][c])) p = r;
        std::swap(m[c], m[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            double k = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= k * m[c][j];
            b[r] -= k * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t j = i + 1; j < n; ++j) v -= m[i][j] * x[j];
        x[i] = v / m[i][i];
    }
    return x;
}

/// Dense I + lambda D^T D for the Hodrick-Prescott normal equations.
inline std::vector<std::vector<double>> hp_normal_matrix(std::size_t n, double lambda) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
    const double taps[3] = {1.0, -2.0, 1.0};
    for (std::size_t r = 0; r + 2 < n; ++r)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[r + i][r + j] += lambda * taps[i] * taps[j];
    return a;
}

inline std::vector<double> hp_dense(const std::vector<double>& y, double lambda) {
    return dense_solve(hp_normal_matrix(y.size(), lambda), y);
}

/// Upper tail of the chi-squared distribution by composite Simpson quadrature
/// of the density over [x, x + span].
inline double chi2_tail_quadrature(double x, int dof, int intervals = 200000, double span = 400.0) {
    const double k = dof / 2.0;
    const double log_norm = -k * std::log(2.0) - std::lgamma(k);
    auto pdf = [&](double t) {
        if (t <= 0.0) return dof == 2 ? 0.5 : 0.0;
        return std::exp(log_norm + (k - 1.0) * std::log(t) - t / 2.0);
    };
    const double h = span / intervals;
    double s = pdf(x) + pdf(x + span);
    for (int i = 1; i < intervals; ++i) s += pdf(x + h * i) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace oracle
