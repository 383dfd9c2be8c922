#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "quarter.hpp"

namespace steadycredit {

/// One row of the credit register. Amounts are euros.
struct CreditObservation {
    Quarter quarter;
    double tcu = 0.0;                  // total credit used, end-of-quarter stock
    double abd = 0.0;                  // new adjusted bad debt exposure in the quarter
    std::optional<double> loans;       // gross loans disbursed in the quarter
    std::optional<double> gdp;         // quarterly nominal GDP

    bool operator==(const CreditObservation&) const = default;
};

/// Validated, contiguous quarterly series. Immutable after construction.
class CreditSeries {
public:
    explicit CreditSeries(std::vector<CreditObservation> obs) : obs_(std::move(obs)) { validate(); }

    std::size_t size() const noexcept { return obs_.size(); }
    const CreditObservation& operator[](std::size_t i) const { return obs_[i]; }
    const std::vector<CreditObservation>& observations() const noexcept { return obs_; }
    auto begin() const noexcept { return obs_.begin(); }
    auto end() const noexcept { return obs_.end(); }

    Quarter first() const { return obs_.front().quarter; }
    Quarter last() const { return obs_.back().quarter; }

    /// Position of `q`, if it lies inside the span.
    std::optional<std::size_t> index_of(Quarter q) const {
        auto off = q.ordinal() - first().ordinal();
        if (off < 0 || off >= static_cast<std::int64_t>(obs_.size())) return std::nullopt;
        return static_cast<std::size_t>(off);
    }

    bool has_loans() const {
        for (const auto& o : obs_)
            if (!o.loans) return false;
        return true;
    }
    bool has_gdp() const {
        for (const auto& o : obs_)
            if (!o.gdp) return false;
        return true;
    }

    bool operator==(const CreditSeries&) const = default;

private:
    void validate() const {
        if (obs_.size() < 2)
            throw Error(ErrorKind::Invariant, "credit series needs at least 2 observations (one interval), got " +
                                                  std::to_string(obs_.size()));
        for (std::size_t i = 0; i < obs_.size(); ++i) {
            const auto& o = obs_[i];
            const auto at = " at " + o.quarter.str();
            if (!(o.tcu > 0.0)) throw Error(ErrorKind::Invariant, "tcu must be > 0" + at);
            if (!(o.abd >= 0.0)) throw Error(ErrorKind::Invariant, "abd must be >= 0" + at);
            if (o.loans && !(*o.loans >= 0.0)) throw Error(ErrorKind::Invariant, "loans must be >= 0" + at);
            if (o.gdp && !(*o.gdp > 0.0)) throw Error(ErrorKind::Invariant, "gdp must be > 0" + at);
            if (i == 0) continue;
            const auto& prev = obs_[i - 1];
            if (o.quarter <= prev.quarter)
                throw Error(ErrorKind::Invariant, "quarters must be strictly increasing" + at);
            if (o.quarter.ordinal() != prev.quarter.ordinal() + 1)
                throw Error(ErrorKind::Gap, "missing quarter " + prev.quarter.next().str() + " between " +
                                                prev.quarter.str() + " and " + o.quarter.str());
            if (!(o.abd < prev.tcu))
                throw Error(ErrorKind::Invariant,
                            "default rate must be < 1: abd" + at + " is not below tcu of " + prev.quarter.str());
        }
    }

    std::vector<CreditObservation> obs_;
};

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCreditCsvHeader = "quarter,tcu_eur,abd_eur,loans_eur,gdp_eur";

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

}  // namespace detail

/// Parses the register CSV. Errors carry the 1-based line number.
inline CreditSeries parse_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<CreditObservation> obs;
    while (std::getline(in, line)) {
        ++lineno;
        auto text = detail::trim(line);
        if (!header_seen) {
            if (lineno == 1 && text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
            if (text != kCreditCsvHeader)
                throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected header '" +
                                                  std::string(kCreditCsvHeader) + "'");
            header_seen = true;
            continue;
        }
        if (text.empty()) continue;
        auto fields = detail::split(text, ',');
        const auto where = "line " + std::to_string(lineno) + ": ";
        if (fields.size() != 5)
            throw Error(ErrorKind::Parse, where + "expected 5 fields, got " + std::to_string(fields.size()));
        CreditObservation o;
        try {
            o.quarter = Quarter::parse(detail::trim(fields[0]));
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, where + e.what());
        }
        auto required = [&](std::string_view f, const char* name) {
            auto v = detail::parse_double(f);
            if (!v) throw Error(ErrorKind::Parse, where + "invalid or missing " + name + " '" + std::string(f) + "'");
            return *v;
        };
        auto optional = [&](std::string_view f, const char* name) -> std::optional<double> {
            if (detail::trim(f).empty()) return std::nullopt;
            auto v = detail::parse_double(f);
            if (!v) throw Error(ErrorKind::Parse, where + "invalid " + name + " '" + std::string(f) + "'");
            return v;
        };
        o.tcu = required(fields[1], "tcu_eur");
        o.abd = required(fields[2], "abd_eur");
        o.loans = optional(fields[3], "loans_eur");
        o.gdp = optional(fields[4], "gdp_eur");
        obs.push_back(o);
    }
    if (!header_seen) throw Error(ErrorKind::Parse, "empty input: missing header");
    return CreditSeries(std::move(obs));
}

inline CreditSeries parse_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_csv(in);
}

inline void emit_csv(const CreditSeries& series, std::ostream& out) {
    out << kCreditCsvHeader << '\n';
    for (const auto& o : series) {
        out << o.quarter.str() << ',' << detail::format_double(o.tcu) << ',' << detail::format_double(o.abd) << ',';
        if (o.loans) out << detail::format_double(*o.loans);
        out << ',';
        if (o.gdp) out << detail::format_double(*o.gdp);
        out << '\n';
    }
}

inline std::string emit_csv(const CreditSeries& series) {
    std::ostringstream out;
    emit_csv(series, out);
    return out.str();
}

// ---------------------------------------------------------------------------
// Windows

/// Analysis window over quarters with explicit boundary inclusion.
struct Window {
    Quarter from;
    Quarter to;
    bool from_inclusive = true;
    bool to_inclusive = true;

    Quarter first_included() const { return from_inclusive ? from : from.next(); }
    Quarter last_included() const { return to_inclusive ? to : to.prev(); }

    bool operator==(const Window&) const = default;
};

/// The two sub-periods of the Italian study: March 1996 up to (excluding) June 2008,
/// and June 2008 through June 2012 inclusive.
inline Window named_window(std::string_view name) {
    if (name == "pre2008") return Window{Quarter(1996, 1), Quarter(2008, 2), true, false};
    if (name == "crisis") return Window{Quarter(2008, 2), Quarter(2012, 2), true, true};
    throw Error(ErrorKind::Domain, "unknown window '" + std::string(name) + "' (expected pre2008 or crisis)");
}

inline Window full_window(const CreditSeries& s) { return Window{s.first(), s.last(), true, true}; }

/// Sub-series with boundary inclusion as flagged. The result must itself be a
/// valid series (two or more observations).
inline CreditSeries slice(const CreditSeries& series, const Window& w) {
    if (!(w.from < w.to))
        throw Error(ErrorKind::Domain, "slice bounds: from " + w.from.str() + " must precede to " + w.to.str());
    if (!series.index_of(w.from) || !series.index_of(w.to))
        throw Error(ErrorKind::Domain, "slice bounds " + w.from.str() + ".." + w.to.str() + " outside series span " +
                                           series.first().str() + ".." + series.last().str());
    auto lo = *series.index_of(w.first_included());
    auto hi_q = w.last_included();
    if (hi_q < w.first_included()) throw Error(ErrorKind::Domain, "slice is empty");
    auto hi = *series.index_of(hi_q);
    if (hi - lo + 1 < 2)
        throw Error(ErrorKind::Domain, "slice " + w.first_included().str() + ".." + hi_q.str() +
                                           " holds fewer than 2 observations");
    return CreditSeries(std::vector<CreditObservation>(series.begin() + lo, series.begin() + hi + 1));
}

/// Observations backing the rate sample of a window: the window's quarters plus
/// one look-back quarter (when the series has it), so that every window quarter
/// is the end of one interval. Without a look-back the first window quarter
/// only serves as a denominator.
struct WindowedSeries {
    CreditSeries series;
    bool has_lookback = false;
};

inline WindowedSeries window_series(const CreditSeries& series, const Window& w) {
    if (!(w.from < w.to))
        throw Error(ErrorKind::Domain, "window bounds: from " + w.from.str() + " must precede to " + w.to.str());
    if (!series.index_of(w.from) || !series.index_of(w.to))
        throw Error(ErrorKind::Domain, "window " + w.from.str() + ".." + w.to.str() + " outside series span " +
                                           series.first().str() + ".." + series.last().str());
    auto first = w.first_included();
    auto last = w.last_included();
    if (last < first) throw Error(ErrorKind::Domain, "window is empty");
    auto lo = *series.index_of(first);
    auto hi = *series.index_of(last);
    bool lookback = lo > 0;
    if (lookback) --lo;
    if (hi - lo + 1 < 2) throw Error(ErrorKind::Domain, "window " + first.str() + ".." + last.str() + " has no interval");
    return {CreditSeries(std::vector<CreditObservation>(series.begin() + lo, series.begin() + hi + 1)), lookback};
}

}  // namespace steadycredit
