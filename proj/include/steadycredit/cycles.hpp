#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "quarter.hpp"

namespace steadycredit::cycles {

enum class ExtremumKind { Maximum, Minimum, Steady };

inline std::string_view to_string(ExtremumKind k) {
    switch (k) {
        case ExtremumKind::Maximum: return "max";
        case ExtremumKind::Minimum: return "min";
        case ExtremumKind::Steady: return "steady";
    }
    return "";
}

struct Extremum {
    std::size_t index = 0;
    std::optional<Quarter> quarter;
    ExtremumKind kind = ExtremumKind::Steady;
    double value = 0.0;
    double amplitude = 0.0;  // |value - series mean|
};

/// P1 rising and accelerating, P2 rising and decelerating, P3 falling and
/// accelerating downwards, P4 falling and decelerating. Trend marks a
/// non-extremal point with zero curvature (e.g. any point of a straight line).
enum class Phase { P1, P2, P3, P4, Max, Min, Steady, Trend };

inline std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::P1: return "P1";
        case Phase::P2: return "P2";
        case Phase::P3: return "P3";
        case Phase::P4: return "P4";
        case Phase::Max: return "max";
        case Phase::Min: return "min";
        case Phase::Steady: return "steady";
        case Phase::Trend: return "trend";
    }
    return "";
}

struct CycleOptions {
    // Differences with |x| <= epsilon count as zero. Exact comparison by default.
    double epsilon = 0.0;
    int quarters_per_year = 4;
};

namespace detail {

inline void require_length(std::span<const double> y, const char* who) {
    if (y.size() < 3)
        throw Error(ErrorKind::Domain, std::string(who) + ": need at least 3 values, got " + std::to_string(y.size()));
}

inline double mean(std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

// Sample standard deviation / sqrt(n); 0 for a single value.
inline double standard_error(std::span<const double> y) {
    if (y.size() < 2) return 0.0;
    double m = mean(y), ss = 0.0;
    for (double v : y) ss += (v - m) * (v - m);
    double n = static_cast<double>(y.size());
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

inline int sign(double x, double eps) { return x > eps ? 1 : x < -eps ? -1 : 0; }

// Classification of interior point t by its two neighbours.
inline std::optional<ExtremumKind> classify(std::span<const double> y, std::size_t t, double eps) {
    int left = sign(y[t] - y[t - 1], eps);
    int right = sign(y[t] - y[t + 1], eps);
    if (left == 0 || right == 0) return ExtremumKind::Steady;
    if (left > 0 && right > 0) return ExtremumKind::Maximum;
    if (left < 0 && right < 0) return ExtremumKind::Minimum;
    return std::nullopt;
}

}  // namespace detail

/// Interior points that are strict maxima, strict minima, or equal to a
/// neighbour (steady). Endpoints are never classified.
inline std::vector<Extremum> find_extrema(std::span<const double> y, std::span<const Quarter> quarters = {},
                                          const CycleOptions& opt = {}) {
    detail::require_length(y, "find_extrema");
    if (!quarters.empty() && quarters.size() != y.size())
        throw Error(ErrorKind::Domain, "find_extrema: quarters and values lengths differ");
    const double m = detail::mean(y);
    std::vector<Extremum> out;
    for (std::size_t t = 1; t + 1 < y.size(); ++t) {
        auto kind = detail::classify(y, t, opt.epsilon);
        if (!kind) continue;
        Extremum e;
        e.index = t;
        if (!quarters.empty()) e.quarter = quarters[t];
        e.kind = *kind;
        e.value = y[t];
        e.amplitude = std::fabs(y[t] - m);
        out.push_back(e);
    }
    return out;
}

/// One tag per interior point. Discrete extrema and plateaus take precedence;
/// elsewhere the centred first difference y(t+1) - y(t-1) and the second
/// difference y(t+1) - 2y(t) + y(t-1) select the phase.
inline std::vector<Phase> phase_labels(std::span<const double> y, const CycleOptions& opt = {}) {
    detail::require_length(y, "phase_labels");
    std::vector<Phase> out;
    out.reserve(y.size() - 2);
    for (std::size_t t = 1; t + 1 < y.size(); ++t) {
        if (auto kind = detail::classify(y, t, opt.epsilon)) {
            out.push_back(*kind == ExtremumKind::Maximum   ? Phase::Max
                          : *kind == ExtremumKind::Minimum ? Phase::Min
                                                           : Phase::Steady);
            continue;
        }
        int slope = detail::sign(y[t + 1] - y[t - 1], opt.epsilon);
        int curvature = detail::sign(y[t + 1] - 2.0 * y[t] + y[t - 1], opt.epsilon);
        if (curvature == 0) out.push_back(Phase::Trend);
        else if (slope > 0) out.push_back(curvature > 0 ? Phase::P1 : Phase::P2);
        else out.push_back(curvature < 0 ? Phase::P3 : Phase::P4);
    }
    return out;
}

struct CycleReport {
    std::vector<Extremum> extrema;
    std::size_t n = 0;
    double series_mean = 0.0;
    double series_se = 0.0;
    std::optional<double> peak_amplitude_mean;
    std::optional<double> peak_amplitude_se;
    std::optional<double> period;     // years
    std::optional<double> frequency;  // cycles per year
    std::vector<Phase> phase_labels;  // interior points 1..n-2
};

/// Amplitudes are measured from the series mean over maxima and minima jointly.
/// The period is the mean spacing of consecutive same-kind strict extrema.
inline CycleReport cycle_stats(std::span<const double> y, std::span<const Quarter> quarters = {},
                               const CycleOptions& opt = {}) {
    detail::require_length(y, "cycle_stats");
    if (opt.quarters_per_year <= 0) throw Error(ErrorKind::Domain, "cycle_stats: quarters_per_year must be > 0");
    CycleReport rep;
    rep.n = y.size();
    rep.series_mean = detail::mean(y);
    rep.series_se = detail::standard_error(y);
    rep.extrema = find_extrema(y, quarters, opt);
    rep.phase_labels = phase_labels(y, opt);

    std::vector<double> amplitudes;
    std::optional<std::size_t> last_max, last_min;
    double spacing_sum = 0.0;
    std::size_t spacing_count = 0;
    for (const auto& e : rep.extrema) {
        if (e.kind == ExtremumKind::Steady) continue;
        amplitudes.push_back(e.amplitude);
        auto& last = e.kind == ExtremumKind::Maximum ? last_max : last_min;
        if (last) {
            spacing_sum += static_cast<double>(e.index - *last);
            ++spacing_count;
        }
        last = e.index;
    }
    if (!amplitudes.empty()) {
        rep.peak_amplitude_mean = detail::mean(amplitudes);
        if (amplitudes.size() >= 2) rep.peak_amplitude_se = detail::standard_error(amplitudes);
    }
    if (spacing_count > 0) {
        rep.period = spacing_sum / static_cast<double>(spacing_count) / opt.quarters_per_year;
        rep.frequency = 1.0 / *rep.period;
    }
    return rep;
}

}  // namespace steadycredit::cycles
