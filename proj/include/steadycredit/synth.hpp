#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rates.hpp"
#include "series.hpp"

namespace steadycredit::synth {

enum class Hypothesis { H0, H1 };

/// Generative model for a quarterly register with known steady-state parameter.
///
/// For every interval k = 1..n_quarters-1:
///   d_k   = d_base + d_amp sin(2 pi k / d_period_quarters)
///   f_k   = (d_k + zeta) / (1 - d_k) + eps_k,   eps_k ~ N(0, noise_sigma^2)
///   tcu_k = tcu_{k-1} (1 - d_k)(1 + f_k),  abd_k = d_k tcu_{k-1},
///   loans_k = f_k tcu_{k-1} (1 - d_k)   (omitted when f_k < 0)
/// zeta is zeta_true under H1 and 0 under H0.
///
/// `tcu_cycle_amp` (default 0) superimposes a relative sinusoid of the same
/// period on the credit stock, tcu_k = tcu0 (1+zeta)^k (1 + A sin(2 pi k / P)),
/// by replacing the deterministic part of f_k with
/// (1+zeta)(1 + A sin_k)/(1 + A sin_{k-1})/(1 - d_k) - 1.
struct Scenario {
    int n_quarters = 18;
    Quarter start{2008, 1};
    double tcu0 = 915.4e9;
    double d_base = 0.0045;
    double d_amp = 0.001;
    double d_period_quarters = 8.0;
    double zeta_true = 0.00245;
    double noise_sigma = 0.0;
    Hypothesis hypothesis = Hypothesis::H1;
    std::uint64_t seed = 0;
    double tcu_cycle_amp = 0.0;
    double gdp0 = 0.0;  // quarterly GDP at start; 0 means no gdp column
    double gdp_growth = 0.0;

    double zeta() const { return hypothesis == Hypothesis::H1 ? zeta_true : 0.0; }

    void validate() const {
        if (n_quarters < 3) throw Error(ErrorKind::Domain, "scenario: n_quarters must be >= 3");
        if (!(d_base - d_amp >= 0.0) || !(d_base + d_amp < 1.0))
            throw Error(ErrorKind::Domain, "scenario: default rates must stay in [0, 1)");
        if (!(d_period_quarters > 0.0)) throw Error(ErrorKind::Domain, "scenario: d_period_quarters must be > 0");
        if (!(tcu0 > 0.0)) throw Error(ErrorKind::Domain, "scenario: tcu0 must be > 0");
        if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::Domain, "scenario: noise_sigma must be >= 0");
        if (!(std::fabs(tcu_cycle_amp) < 1.0)) throw Error(ErrorKind::Domain, "scenario: |tcu_cycle_amp| must be < 1");
        if (!(gdp0 >= 0.0)) throw Error(ErrorKind::Domain, "scenario: gdp0 must be >= 0");
    }
};

/// Standard normal draws from mt19937_64 by Box-Muller. Written out rather than
/// using std::normal_distribution so the stream is identical on every standard
/// library.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = uniform_open();
        double u2 = uniform_open();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        return r * std::cos(theta);
    }

private:
    // (0, 1) with 53 random bits.
    double uniform_open() {
        std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

struct Generated {
    CreditSeries series;
    RateSeries truth;
};

inline Generated generate(const Scenario& sc) {
    sc.validate();
    const double zeta = sc.zeta();
    const double two_pi = 2.0 * std::numbers::pi;
    auto d_at = [&](int k) { return sc.d_base + sc.d_amp * std::sin(two_pi * k / sc.d_period_quarters); };
    auto wave = [&](int k) { return 1.0 + sc.tcu_cycle_amp * std::sin(two_pi * k / sc.d_period_quarters); };

    NormalStream noise(sc.seed);
    std::vector<CreditObservation> obs;
    obs.reserve(static_cast<std::size_t>(sc.n_quarters));
    RateSeries truth;

    Quarter q = sc.start;
    double gdp = sc.gdp0;
    {
        // Opening stock; its abd and loans refer to an interval outside the sample.
        double d0 = d_at(0);
        CreditObservation o{q, sc.tcu0, d0 * sc.tcu0, std::nullopt, std::nullopt};
        double f0 = (d0 + zeta) / (1.0 - d0);
        if (f0 >= 0.0) o.loans = f0 * sc.tcu0 * (1.0 - d0);
        if (sc.gdp0 > 0.0) o.gdp = gdp;
        obs.push_back(o);
    }
    for (int k = 1; k < sc.n_quarters; ++k) {
        q = q.next();
        const double prev_tcu = obs.back().tcu;
        const double d = d_at(k);
        double f = sc.tcu_cycle_amp == 0.0 ? (d + zeta) / (1.0 - d)
                                           : (1.0 + zeta) * wave(k) / wave(k - 1) / (1.0 - d) - 1.0;
        if (sc.noise_sigma > 0.0) f += sc.noise_sigma * noise.next();
        if (!(f > -1.0))
            throw Error(ErrorKind::Domain, "synth: generated f <= -1 at interval " + std::to_string(k) + " (seed " +
                                               std::to_string(sc.seed) + "); reduce noise_sigma");
        const double surviving = prev_tcu * (1.0 - d);
        CreditObservation o{q, surviving * (1.0 + f), d * prev_tcu, std::nullopt, std::nullopt};
        GrowthSource src = GrowthSource::BalanceIdentity;
        if (f >= 0.0) {
            o.loans = f * surviving;
            src = GrowthSource::LoansFormula;
        }
        if (sc.gdp0 > 0.0) {
            gdp *= 1.0 + sc.gdp_growth;
            o.gdp = gdp;
        }
        obs.push_back(o);
        truth.points.push_back({q, d, f, src});
    }
    truth.first = truth.points.front().interval_end;
    truth.last = truth.points.back().interval_end;
    return {CreditSeries(std::move(obs)), std::move(truth)};
}

/// key=value lines; '#' starts a comment. Unknown keys are errors.
inline Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto text = steadycredit::detail::trim(line);
        if (text.empty()) continue;
        const auto where = "scenario line " + std::to_string(lineno) + ": ";
        auto eq = text.find('=');
        if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, where + "expected key=value");
        auto key = steadycredit::detail::trim(text.substr(0, eq));
        auto value = steadycredit::detail::trim(text.substr(eq + 1));
        auto num = [&]() {
            auto v = steadycredit::detail::parse_double(value);
            if (!v) throw Error(ErrorKind::Parse, where + "invalid number '" + std::string(value) + "'");
            return *v;
        };
        auto integer = [&]() -> long long {
            double v = num();
            if (v != std::floor(v)) throw Error(ErrorKind::Parse, where + "expected an integer for " + std::string(key));
            return static_cast<long long>(v);
        };
        if (key == "n_quarters") sc.n_quarters = static_cast<int>(integer());
        else if (key == "start") {
            try {
                sc.start = Quarter::parse(value);
            } catch (const Error& e) {
                throw Error(ErrorKind::Parse, where + e.what());
            }
        } else if (key == "tcu0") sc.tcu0 = num();
        else if (key == "d_base") sc.d_base = num();
        else if (key == "d_amp") sc.d_amp = num();
        else if (key == "d_period_quarters") sc.d_period_quarters = num();
        else if (key == "zeta_true") sc.zeta_true = num();
        else if (key == "noise_sigma") sc.noise_sigma = num();
        else if (key == "hypothesis") {
            if (value == "H0") sc.hypothesis = Hypothesis::H0;
            else if (value == "H1") sc.hypothesis = Hypothesis::H1;
            else throw Error(ErrorKind::Parse, where + "hypothesis must be H0 or H1");
        } else if (key == "seed") {
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), sc.seed);
            if (ec != std::errc() || ptr != value.data() + value.size())
                throw Error(ErrorKind::Parse, where + "seed must be an unsigned integer");
        }
        else if (key == "tcu_cycle_amp") sc.tcu_cycle_amp = num();
        else if (key == "gdp0") sc.gdp0 = num();
        else if (key == "gdp_growth") sc.gdp_growth = num();
        else throw Error(ErrorKind::Parse, where + "unknown key '" + std::string(key) + "'");
    }
    sc.validate();
    return sc;
}

inline Scenario parse_scenario(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_scenario(in);
}

}  // namespace steadycredit::synth
