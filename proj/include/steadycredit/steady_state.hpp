#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "ols.hpp"
#include "rates.hpp"
#include "special.hpp"

namespace steadycredit::steady_state {

enum class Method { LeastSquares, IrrRoot };

inline std::string_view to_string(Method m) { return m == Method::LeastSquares ? "least-squares" : "irr-root"; }

/// Where the chi-squared reference scale came from.
enum class SigmaRefSource { Override, OlsResidual, OwnResidual, None };

inline std::string_view to_string(SigmaRefSource s) {
    switch (s) {
        case SigmaRefSource::Override: return "override";
        case SigmaRefSource::OlsResidual: return "ols-s-resid";
        case SigmaRefSource::OwnResidual: return "ssf-s-resid";
        case SigmaRefSource::None: return "none";
    }
    return "none";
}

struct SspEstimate {
    double zeta = 0.0;
    double s = 1.0;  // 1 / (1 + zeta)
    Method method = Method::LeastSquares;
    double sigma_resid = 0.0;
    double s_resid = 0.0;
    double chi2 = 0.0;
    int dof = 0;
    std::size_t n = 0;
    double p_value = 1.0;
    double sigma_ref = 0.0;
    SigmaRefSource sigma_ref_source = SigmaRefSource::None;
};

struct SspOptions {
    // Divides the residuals in the chi-squared statistic. When unset, the OLS
    // residual scale of f on d over the same sample is used.
    std::optional<double> sigma_ref;
};

/// Credit growth expected when supply replaces defaulted credit plus a
/// steady-state margin: (d + zeta) / (1 - d). zeta = 0 gives the odds of default.
inline double expected_growth(double d, double zeta) {
    if (!(d >= 0.0) || !(d < 1.0)) throw Error(ErrorKind::Domain, "expected_growth: d must lie in [0, 1)");
    return (d + zeta) / (1.0 - d);
}

struct ChiSquared {
    double chi2 = 0.0;
    int dof = 0;
};

inline ChiSquared chi_squared(std::span<const double> observed, std::span<const double> expected, double sigma_ref) {
    if (observed.size() != expected.size())
        throw Error(ErrorKind::Domain, "chi_squared: observed and expected lengths differ");
    if (observed.size() < 2) throw Error(ErrorKind::Domain, "chi_squared: need at least 2 values");
    if (!(sigma_ref > 0.0)) throw Error(ErrorKind::Domain, "chi_squared: sigma_ref must be > 0");
    double chi2 = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        double z = (observed[k] - expected[k]) / sigma_ref;
        chi2 += z * z;
    }
    return {chi2, static_cast<int>(observed.size()) - 1};
}

inline double chi2_p_value(double chi2, int dof) { return special::chi2_sf(chi2, dof); }

namespace detail {

// Fills residual scales and the chi-squared block of `est` for a given zeta.
inline void finish(SspEstimate& est, const RateSeries& rates, const SspOptions& opt) {
    const auto n = rates.size();
    std::vector<double> obs(n), expct(n);
    double sse = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        obs[k] = rates[k].f;
        expct[k] = expected_growth(rates[k].d, est.zeta);
        double e = obs[k] - expct[k];
        sse += e * e;
    }
    const double nd = static_cast<double>(n);
    est.n = n;
    est.s = 1.0 / (1.0 + est.zeta);
    est.sigma_resid = std::sqrt(sse / nd);
    est.s_resid = std::sqrt(sse / (nd - 1.0));
    est.dof = static_cast<int>(n) - 1;

    if (opt.sigma_ref) {
        if (!(*opt.sigma_ref > 0.0)) throw Error(ErrorKind::Domain, "sigma_ref override must be > 0");
        est.sigma_ref = *opt.sigma_ref;
        est.sigma_ref_source = SigmaRefSource::Override;
    } else {
        est.sigma_ref_source = SigmaRefSource::None;
        if (n >= 3) {
            try {
                auto d = rates.d_values();
                auto f = rates.f_values();
                auto o = ols::fit(d, f);
                if (o.s_resid > 0.0) {
                    est.sigma_ref = o.s_resid;
                    est.sigma_ref_source = SigmaRefSource::OlsResidual;
                }
            } catch (const Error&) {
                // constant d: no regression scale, fall through
            }
        }
        if (est.sigma_ref_source == SigmaRefSource::None && est.s_resid > 0.0) {
            est.sigma_ref = est.s_resid;
            est.sigma_ref_source = SigmaRefSource::OwnResidual;
        }
    }
    if (est.sigma_ref_source == SigmaRefSource::None) {
        // Every residual is exactly zero.
        est.sigma_ref = 0.0;
        est.chi2 = 0.0;
    } else {
        est.chi2 = chi_squared(obs, expct, est.sigma_ref).chi2;
    }
    est.p_value = chi2_p_value(est.chi2, est.dof);
}

inline void require_points(const RateSeries& rates, const char* who) {
    if (rates.size() < 2)
        throw Error(ErrorKind::Domain, std::string(who) + ": need at least 2 rate points, got " +
                                           std::to_string(rates.size()));
}

}  // namespace detail

/// zeta minimizing sum_k (f_k - (d_k + zeta)/(1 - d_k))^2, in closed form.
inline SspEstimate ssp_least_squares(const RateSeries& rates, const SspOptions& opt = {}) {
    detail::require_points(rates, "ssp_least_squares");
    double num = 0.0, den = 0.0;
    for (const auto& p : rates.points) {
        double w = 1.0 / (1.0 - p.d);
        num += (p.f * (1.0 - p.d) - p.d) * w * w;
        den += w * w;
    }
    SspEstimate est;
    est.method = Method::LeastSquares;
    est.zeta = num / den;
    detail::finish(est, rates, opt);
    return est;
}

// ---------------------------------------------------------------------------
// Discounted steady-state equation
//
// With per-interval survival-growth factors a_k = (1 + f_k)(1 - d_k) and the
// cumulative factors C_k = a_1 a_2 ... a_k, the discount factor s solves
//
//     F(s) = sum_{k=1..n} C_k s^k - n = 0.
//
// Each term C_k s^k is the trajectory index after k intervals, so the root
// makes the discounted trajectory average exactly 1. Under the steady state
// (all a_k = 1 + zeta) the root is s = 1 / (1 + zeta); all a_k = 1 gives s = 1.
// F(0) = -n and F is strictly increasing for s > 0, so the root is unique.

struct RootOptions {
    double bracket_width = 1e-9;
    double f_tol = 1e-12;
    double s_max = 10.0;
    int max_iter = 200;
};

inline std::vector<double> cumulative_factors(std::span<const double> growth_factors) {
    std::vector<double> c(growth_factors.size());
    double acc = 1.0;
    for (std::size_t k = 0; k < growth_factors.size(); ++k) {
        acc *= growth_factors[k];
        c[k] = acc;
    }
    return c;
}

/// F(s) and F'(s) via Horner.
inline std::pair<double, double> steady_state_residual(std::span<const double> cumulative, double s) {
    double p = 0.0, dp = 0.0;
    for (std::size_t k = cumulative.size(); k-- > 0;) {
        dp = dp * s + p;
        p = p * s + cumulative[k];
    }
    // p(s) = sum C_k s^(k-1); F = s p - n, F' = p + s p'
    return {s * p - static_cast<double>(cumulative.size()), p + s * dp};
}

inline double solve_discount_factor(std::span<const double> growth_factors, const RootOptions& opt = {}) {
    const std::size_t n = growth_factors.size();
    if (n < 2) throw Error(ErrorKind::Domain, "steady-state equation is degenerate for fewer than 2 intervals");
    for (double a : growth_factors)
        if (!(a > 0.0)) throw Error(ErrorKind::Domain, "growth factors (1+f)(1-d) must be > 0");
    auto c = cumulative_factors(growth_factors);
    auto F = [&](double s) { return steady_state_residual(c, s).first; };

    double lo = 0.0, hi = 1.0;
    while (F(hi) < 0.0) {
        if (hi >= opt.s_max)
            throw Error(ErrorKind::Numeric, "steady-state equation: no sign change in (0, " +
                                                std::to_string(opt.s_max) + "]");
        lo = hi;
        hi = std::min(2.0 * hi, opt.s_max);
    }
    if (!(F(lo) < 0.0) || !(F(hi) >= 0.0))
        throw Error(ErrorKind::Numeric, "steady-state equation: bracket lacks a sign change");

    int iter = 0;
    while (hi - lo > opt.bracket_width && iter < opt.max_iter) {
        double mid = 0.5 * (lo + hi);
        if (F(mid) < 0.0) lo = mid;
        else hi = mid;
        ++iter;
    }

    double s = 0.5 * (lo + hi);
    for (; iter < opt.max_iter; ++iter) {
        auto [fs, dfs] = steady_state_residual(c, s);
        if (std::fabs(fs) < opt.f_tol) return s;
        if (fs < 0.0) lo = s;
        else hi = s;
        double next = s - fs / dfs;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * s) return next;
        s = next;
    }
    throw Error(ErrorKind::Numeric, "steady-state equation: iteration cap reached without convergence");
}

/// zeta = 1/s - 1 with s the root of the discounted steady-state equation.
inline SspEstimate ssp_irr_root(const RateSeries& rates, const SspOptions& opt = {}, const RootOptions& root = {}) {
    detail::require_points(rates, "ssp_irr_root");
    std::vector<double> a;
    a.reserve(rates.size());
    for (const auto& p : rates.points) a.push_back((1.0 + p.f) * (1.0 - p.d));
    double s = solve_discount_factor(a, root);
    SspEstimate est;
    est.method = Method::IrrRoot;
    est.zeta = 1.0 / s - 1.0;
    detail::finish(est, rates, opt);
    est.s = s;
    return est;
}

// ---------------------------------------------------------------------------
// Trajectory

enum class Direction { None, Rising, Falling, Flat };

inline std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::None: return "";
        case Direction::Rising: return "rising";
        case Direction::Falling: return "falling";
        case Direction::Flat: return "flat";
    }
    return "";
}

struct TrajectoryPoint {
    Quarter quarter;
    double d = 0.0;
    double f_observed = 0.0;
    double f_expected = 0.0;
    double cumulative_index = 1.0;  // prod_{j<=k} (1+f_j)(1-d_j)/(1+zeta)
    Direction direction = Direction::None;  // sign of f_k - f_{k-1}
};

using SteadyStateTrajectory = std::vector<TrajectoryPoint>;

inline SteadyStateTrajectory trajectory(const RateSeries& rates, double zeta) {
    SteadyStateTrajectory out;
    out.reserve(rates.size());
    double index = 1.0;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        const auto& p = rates[k];
        index *= (1.0 + p.f) * (1.0 - p.d) / (1.0 + zeta);
        TrajectoryPoint t{p.interval_end, p.d, p.f, expected_growth(p.d, zeta), index, Direction::None};
        if (k > 0) {
            double prev = rates[k - 1].f;
            t.direction = p.f > prev ? Direction::Rising : p.f < prev ? Direction::Falling : Direction::Flat;
        }
        out.push_back(t);
    }
    return out;
}

inline constexpr std::string_view kTrajectoryCsvHeader = "quarter,d,f_observed,f_expected,cumulative_index,direction";

inline std::string emit_trajectory_csv(const SteadyStateTrajectory& tr) {
    std::string out(kTrajectoryCsvHeader);
    out += '\n';
    for (const auto& t : tr) {
        out += t.quarter.str() + ',' + steadycredit::detail::format_double(t.d) + ',' +
               steadycredit::detail::format_double(t.f_observed) + ',' +
               steadycredit::detail::format_double(t.f_expected) + ',' +
               steadycredit::detail::format_double(t.cumulative_index) + ',' + std::string(to_string(t.direction)) +
               '\n';
    }
    return out;
}

}  // namespace steadycredit::steady_state
