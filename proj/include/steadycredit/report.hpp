#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "basel_gap.hpp"
#include "cycles.hpp"
#include "error.hpp"
#include "ols.hpp"
#include "rates.hpp"
#include "series.hpp"
#include "steady_state.hpp"

namespace steadycredit {

struct AnalysisConfig {
    RatesConfig rates;
    basel_gap::GapConfig gap;
    steady_state::SspOptions ssp;
    cycles::CycleOptions cycles;
};

struct StageError {
    std::string stage;
    std::string message;
};

/// Everything derived from one analysis window. All rate-based sections share
/// `rates`; cycles and gap use the window's own quarters (no look-back).
struct AnalysisReport {
    Window window;
    bool has_lookback = false;
    RateSeries rates;
    std::vector<RatePoint> context;  // rate points of the full series outside the window
    std::optional<ols::OlsFit> ols;
    std::optional<steady_state::SspEstimate> ssp_ls;
    std::optional<steady_state::SspEstimate> ssp_irr;
    std::optional<cycles::CycleReport> cycles;
    std::optional<basel_gap::GapReport> gap;
    steady_state::SteadyStateTrajectory trajectory;
    std::vector<StageError> errors;
};

inline AnalysisReport analyze(const CreditSeries& series, const Window& window, const AnalysisConfig& cfg = {}) {
    AnalysisReport rep;
    rep.window = window;
    auto ws = window_series(series, window);
    rep.has_lookback = ws.has_lookback;
    rep.rates = credit_growth_rates(ws.series, cfg.rates);

    auto all = credit_growth_rates(series, cfg.rates);
    for (const auto& p : all.points)
        if (p.interval_end < rep.rates.first || p.interval_end > rep.rates.last) rep.context.push_back(p);

    auto stage = [&](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            rep.errors.push_back({name, e.what()});
        }
    };

    const auto d = rep.rates.d_values();
    const auto f = rep.rates.f_values();
    stage("ols", [&] { rep.ols = ols::fit(d, f); });
    stage("ssp_least_squares", [&] { rep.ssp_ls = steady_state::ssp_least_squares(rep.rates, cfg.ssp); });
    stage("ssp_irr_root", [&] { rep.ssp_irr = steady_state::ssp_irr_root(rep.rates, cfg.ssp); });
    if (rep.ssp_ls) rep.trajectory = steady_state::trajectory(rep.rates, rep.ssp_ls->zeta);

    const auto& obs = ws.series.observations();
    const std::size_t skip = ws.has_lookback ? 1 : 0;
    std::vector<double> tcu;
    std::vector<Quarter> quarters;
    for (std::size_t i = skip; i < obs.size(); ++i) {
        tcu.push_back(obs[i].tcu);
        quarters.push_back(obs[i].quarter);
    }
    stage("cycles", [&] { rep.cycles = cycles::cycle_stats(tcu, quarters, cfg.cycles); });

    std::vector<CreditObservation> own(obs.begin() + static_cast<std::ptrdiff_t>(skip), obs.end());
    bool gdp = !own.empty();
    for (const auto& o : own) gdp = gdp && o.gdp.has_value();
    if (gdp) stage("gap", [&] { rep.gap = basel_gap::credit_gap(CreditSeries(own), cfg.gap); });
    return rep;
}

// ---------------------------------------------------------------------------
// JSON

namespace json_io {

using json = nlohmann::ordered_json;

inline constexpr int kDefaultPrecision = 6;

/// Significant digits from STEADYCREDIT_PRECISION, else 6.
inline int precision_from_env() {
    if (const char* v = std::getenv("STEADYCREDIT_PRECISION")) {
        char* end = nullptr;
        long p = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && p >= 1 && p <= 17) return static_cast<int>(p);
    }
    return kDefaultPrecision;
}

/// Rounds to `digits` significant digits; non-finite values become null.
inline json num(double v, int digits) {
    if (!std::isfinite(v)) return nullptr;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    double r = std::strtod(buf, nullptr);
    if (r == 0.0) r = 0.0;  // drop negative zero
    return r;
}

inline json opt_num(const std::optional<double>& v, int digits) { return v ? num(*v, digits) : json(nullptr); }

inline json to_json(const ols::OlsFit& f, int p) {
    return json{{"n", f.n},
                {"intercept", num(f.beta1, p)},
                {"sigma_intercept", num(f.sigma_intercept, p)},
                {"x_intercept", num(f.x_intercept, p)},
                {"slope", num(f.beta2, p)},
                {"sigma_slope", num(f.sigma_slope, p)},
                {"correlation", num(f.r, p)},
                {"r2", num(f.r2, p)},
                {"sigma", num(f.sigma_resid, p)},
                {"s_for_residual", num(f.s_resid, p)}};
}

inline json to_json(const steady_state::SspEstimate& e, int p) {
    return json{{"n", e.n},
                {"zeta", num(e.zeta, p)},
                {"s", num(e.s, p)},
                {"sigma", num(e.sigma_resid, p)},
                {"s_for_residual", num(e.s_resid, p)},
                {"chi2", num(e.chi2, p)},
                {"dof", e.dof},
                {"p_value", num(e.p_value, p)},
                {"sigma_ref", num(e.sigma_ref, p)},
                {"sigma_ref_source", steady_state::to_string(e.sigma_ref_source)},
                {"method", steady_state::to_string(e.method)}};
}

inline json to_json(const cycles::CycleReport& c, int p) {
    json extrema = json::array();
    for (const auto& e : c.extrema) {
        extrema.push_back(json{{"index", e.index},
                               {"quarter", e.quarter ? json(e.quarter->str()) : json(nullptr)},
                               {"kind", cycles::to_string(e.kind)},
                               {"value", num(e.value, p)},
                               {"amplitude", num(e.amplitude, p)}});
    }
    json labels = json::array();
    for (auto l : c.phase_labels) labels.push_back(cycles::to_string(l));
    return json{{"n", c.n},
                {"series_mean", num(c.series_mean, p)},
                {"series_se", num(c.series_se, p)},
                {"peak_amplitude_mean", opt_num(c.peak_amplitude_mean, p)},
                {"peak_amplitude_se", opt_num(c.peak_amplitude_se, p)},
                {"period_years", opt_num(c.period, p)},
                {"frequency", opt_num(c.frequency, p)},
                {"extrema", extrema},
                {"phase_labels", labels}};
}

inline json to_json(const basel_gap::GapReport& g, int p) {
    json rows = json::array();
    for (const auto& r : g)
        rows.push_back(json{{"quarter", r.quarter.str()},
                            {"credit_to_gdp", num(r.credit_to_gdp, p)},
                            {"trend", num(r.trend, p)},
                            {"gap", num(r.gap, p)},
                            {"buffer_add_on", num(r.buffer_add_on, p)}});
    return rows;
}

inline json to_json(const steady_state::SteadyStateTrajectory& t, int p) {
    json rows = json::array();
    for (const auto& r : t)
        rows.push_back(json{{"quarter", r.quarter.str()},
                            {"d", num(r.d, p)},
                            {"f_observed", num(r.f_observed, p)},
                            {"f_expected", num(r.f_expected, p)},
                            {"cumulative_index", num(r.cumulative_index, p)},
                            {"direction", r.direction == steady_state::Direction::None
                                              ? json(nullptr)
                                              : json(steady_state::to_string(r.direction))}});
    return rows;
}

inline json to_json(const AnalysisReport& r, int p) {
    json window{{"from", r.window.from.str()},
                {"to", r.window.to.str()},
                {"from_inclusive", r.window.from_inclusive},
                {"to_inclusive", r.window.to_inclusive},
                {"first_interval_end", r.rates.first.str()},
                {"last_interval_end", r.rates.last.str()},
                {"n_intervals", r.rates.size()},
                {"lookback", r.has_lookback}};
    json errors = json::array();
    for (const auto& e : r.errors) errors.push_back(json{{"stage", e.stage}, {"message", e.message}});
    return json{{"window", window},
                {"ols", r.ols ? to_json(*r.ols, p) : json(nullptr)},
                {"ssf", r.ssp_ls ? to_json(*r.ssp_ls, p) : json(nullptr)},
                {"ssf_irr", r.ssp_irr ? to_json(*r.ssp_irr, p) : json(nullptr)},
                {"cycles", r.cycles ? to_json(*r.cycles, p) : json(nullptr)},
                {"gap", r.gap ? to_json(*r.gap, p) : json(nullptr)},
                {"trajectory", to_json(r.trajectory, p)},
                {"errors", errors}};
}

}  // namespace json_io
}  // namespace steadycredit
