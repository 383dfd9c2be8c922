#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "banded.hpp"
#include "error.hpp"
#include "series.hpp"

namespace steadycredit::basel_gap {

/// Hodrick-Prescott trend: argmin_t sum (y - t)^2 + lambda * sum (second difference of t)^2.
///
/// Solved through the dual pentadiagonal system
///     (D D^T + I / lambda) w = D y,   trend = y - D^T w,
/// with D the (n-2) x n second-difference operator. This equals
/// (I + lambda D^T D)^{-1} y and keeps affine inputs exact even for very
/// large lambda.
inline std::vector<double> hp_filter(std::span<const double> y, double lambda) {
    if (y.size() < 3) throw Error(ErrorKind::Domain, "hp_filter: need at least 3 values, got " + std::to_string(y.size()));
    if (!(lambda >= 0.0)) throw Error(ErrorKind::Domain, "hp_filter: lambda must be >= 0");
    std::vector<double> trend(y.begin(), y.end());
    if (lambda == 0.0) return trend;

    const std::size_t m = y.size() - 2;
    // D D^T: 6 on the diagonal, -4 and 1 on the first two off-diagonals.
    linalg::SymmetricBand<2> a(m);
    std::vector<double> dy(m);
    for (std::size_t i = 0; i < m; ++i) {
        a.upper(i, 0) = 6.0 + 1.0 / lambda;
        a.upper(i, 1) = i + 1 < m ? -4.0 : 0.0;
        a.upper(i, 2) = i + 2 < m ? 1.0 : 0.0;
        dy[i] = y[i] - 2.0 * y[i + 1] + y[i + 2];
    }
    auto w = linalg::solve(a, dy);
    for (std::size_t i = 0; i < m; ++i) {
        trend[i] -= w[i];
        trend[i + 1] += 2.0 * w[i];
        trend[i + 2] -= w[i];
    }
    return trend;
}

struct GapConfig {
    double lambda = 400000.0;
    double gap_low = 2.0;     // percentage points
    double gap_high = 10.0;   // percentage points
    double buffer_max = 0.025;
    double gdp_annualization = 4.0;  // quarterly GDP multiplier

    void validate() const {
        if (!(lambda >= 0.0)) throw Error(ErrorKind::Domain, "gap config: lambda must be >= 0");
        if (!(gap_low < gap_high)) throw Error(ErrorKind::Domain, "gap config: gap_low must be < gap_high");
        if (!(buffer_max > 0.0)) throw Error(ErrorKind::Domain, "gap config: buffer_max must be > 0");
        if (!(gdp_annualization > 0.0)) throw Error(ErrorKind::Domain, "gap config: gdp_annualization must be > 0");
    }
};

/// 0 below gap_low, buffer_max above gap_high, linear in between.
inline double buffer_add_on(double gap, const GapConfig& cfg) {
    if (gap <= cfg.gap_low) return 0.0;
    if (gap >= cfg.gap_high) return cfg.buffer_max;
    return cfg.buffer_max * (gap - cfg.gap_low) / (cfg.gap_high - cfg.gap_low);
}

struct GapPoint {
    Quarter quarter;
    double credit_to_gdp = 0.0;  // percent
    double trend = 0.0;          // percent
    double gap = 0.0;            // percentage points
    double buffer_add_on = 0.0;  // fraction
};

using GapReport = std::vector<GapPoint>;

inline GapReport credit_gap(const CreditSeries& series, const GapConfig& cfg = {}) {
    cfg.validate();
    if (!series.has_gdp()) throw Error(ErrorKind::ColumnAbsent, "credit_gap: gdp_eur column absent for some quarter");
    if (series.size() < 3) throw Error(ErrorKind::Domain, "credit_gap: need at least 3 quarters");
    std::vector<double> ratio;
    ratio.reserve(series.size());
    for (const auto& o : series) ratio.push_back(100.0 * o.tcu / (cfg.gdp_annualization * *o.gdp));
    auto trend = hp_filter(ratio, cfg.lambda);
    GapReport rep;
    rep.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        double gap = ratio[i] - trend[i];
        rep.push_back({series[i].quarter, ratio[i], trend[i], gap, buffer_add_on(gap, cfg)});
    }
    return rep;
}

inline constexpr std::string_view kGapCsvHeader = "quarter,credit_to_gdp,trend,gap,buffer_add_on";

inline std::string emit_gap_csv(const GapReport& rep) {
    std::string out(kGapCsvHeader);
    out += '\n';
    for (const auto& g : rep)
        out += g.quarter.str() + ',' + steadycredit::detail::format_double(g.credit_to_gdp) + ',' +
               steadycredit::detail::format_double(g.trend) + ',' + steadycredit::detail::format_double(g.gap) + ',' +
               steadycredit::detail::format_double(g.buffer_add_on) + '\n';
    return out;
}

}  // namespace steadycredit::basel_gap
