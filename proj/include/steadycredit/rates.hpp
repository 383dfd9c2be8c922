#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "series.hpp"

namespace steadycredit {

enum class GrowthSource { LoansFormula, BalanceIdentity };

inline std::string_view to_string(GrowthSource s) {
    return s == GrowthSource::LoansFormula ? "loans-formula" : "balance-identity";
}

/// Rates over the interval ending at `interval_end`.
struct RatePoint {
    Quarter interval_end;
    double d = 0.0;  // default rate, [0,1)
    double f = 0.0;  // credit growth rate, > -1
    GrowthSource f_source = GrowthSource::LoansFormula;

    bool operator==(const RatePoint&) const = default;
};

struct RateSeries {
    std::vector<RatePoint> points;
    Quarter first;  // interval_end of the first point
    Quarter last;   // interval_end of the last point

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    const RatePoint& operator[](std::size_t i) const { return points[i]; }

    std::vector<double> d_values() const {
        std::vector<double> v;
        v.reserve(points.size());
        for (const auto& p : points) v.push_back(p.d);
        return v;
    }
    std::vector<double> f_values() const {
        std::vector<double> v;
        v.reserve(points.size());
        for (const auto& p : points) v.push_back(p.f);
        return v;
    }
};

enum class GrowthMode { PreferLoans, ForceBalanceIdentity };

struct RatesConfig {
    // Sliding retrospection parameter in quarters. Only perfect information (0)
    // is supported.
    int delta = 0;
    GrowthMode f_mode = GrowthMode::PreferLoans;
};

/// d_k = abd_k / tcu_{k-1} for every interval k.
inline std::vector<std::pair<Quarter, double>> default_rates(const CreditSeries& series) {
    std::vector<std::pair<Quarter, double>> out;
    out.reserve(series.size() - 1);
    for (std::size_t k = 1; k < series.size(); ++k) {
        double d = series[k].abd / series[k - 1].tcu;
        if (!(d < 1.0))
            throw Error(ErrorKind::Invariant, "default rate >= 1 at " + series[k].quarter.str());
        out.emplace_back(series[k].quarter, d);
    }
    return out;
}

/// Growth over each interval, given the surviving stock tcu_{k-1}(1 - d_k):
///   loans formula      f_k = loans_k / (tcu_{k-1}(1 - d_k))
///   balance identity   f_k = tcu_k / (tcu_{k-1}(1 - d_k)) - 1
/// PreferLoans falls back to the balance identity per quarter when loans is
/// absent; the choice is recorded on each point.
inline RateSeries credit_growth_rates(const CreditSeries& series, const RatesConfig& cfg = {}) {
    if (cfg.delta != 0)
        throw Error(ErrorKind::Domain, "only delta = 0 (perfect retrospective information) is supported");
    auto d = default_rates(series);
    RateSeries rs;
    rs.points.reserve(d.size());
    for (std::size_t k = 1; k < series.size(); ++k) {
        const auto& cur = series[k];
        double dk = d[k - 1].second;
        double surviving = series[k - 1].tcu * (1.0 - dk);
        if (!(surviving > 0.0))
            throw Error(ErrorKind::Invariant, "non-positive surviving credit at " + cur.quarter.str());
        RatePoint p{cur.quarter, dk, 0.0, GrowthSource::BalanceIdentity};
        if (cfg.f_mode == GrowthMode::PreferLoans && cur.loans) {
            p.f = *cur.loans / surviving;
            p.f_source = GrowthSource::LoansFormula;
        } else {
            p.f = cur.tcu / surviving - 1.0;
        }
        if (!(p.f > -1.0))
            throw Error(ErrorKind::Invariant, "credit growth rate <= -1 at " + cur.quarter.str());
        rs.points.push_back(p);
    }
    rs.first = rs.points.front().interval_end;
    rs.last = rs.points.back().interval_end;
    return rs;
}

inline constexpr std::string_view kRatesCsvHeader = "interval_end,d,f,f_source";

inline void emit_rates_csv(const RateSeries& rs, std::ostream& out) {
    out << kRatesCsvHeader << '\n';
    for (const auto& p : rs.points)
        out << p.interval_end.str() << ',' << detail::format_double(p.d) << ',' << detail::format_double(p.f) << ','
            << to_string(p.f_source) << '\n';
}

inline std::string emit_rates_csv(const RateSeries& rs) {
    std::ostringstream out;
    emit_rates_csv(rs, out);
    return out.str();
}

}  // namespace steadycredit
