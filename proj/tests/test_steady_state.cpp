#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <steadycredit/steady_state.hpp>
#include <steadycredit/synth.hpp>

#include "oracles.hpp"

using namespace steadycredit;
using namespace steadycredit::steady_state;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RateSeries make_rates(const std::vector<double>& d, const std::vector<double>& f) {
    RateSeries rs;
    Quarter q(2008, 2);
    for (std::size_t k = 0; k < d.size(); ++k, q = q.next())
        rs.points.push_back({q, d[k], f[k], GrowthSource::BalanceIdentity});
    rs.first = rs.points.front().interval_end;
    rs.last = rs.points.back().interval_end;
    return rs;
}

RateSeries exact_h1(const std::vector<double>& d, double zeta) {
    std::vector<double> f;
    for (double dk : d) f.push_back((dk + zeta) / (1.0 - dk));
    return make_rates(d, f);
}

std::vector<double> cyclical_d(int n, double base = 0.0045, double amp = 0.001) {
    std::vector<double> d;
    for (int k = 1; k <= n; ++k) d.push_back(base + amp * std::sin(2.0 * M_PI * k / 8.0));
    return d;
}

}  // namespace

TEST_CASE("expected growth", "[steady_state]") {
    CHECK(expected_growth(0.0, 0.0) == 0.0);
    CHECK(expected_growth(0.5, 0.0) == 1.0);
    CHECK_THAT(expected_growth(0.004, 0.00245), WithinRel(0.00645 / 0.996, 1e-15));
    CHECK_THAT(expected_growth(0.004, 0.00245), WithinAbs(0.0064759036, 1e-10));
    CHECK_THROWS_AS(expected_growth(1.0, 0.0), Error);
    CHECK_THROWS_AS(expected_growth(-0.1, 0.0), Error);
}

TEST_CASE("least squares zeta on exact data", "[steady_state][ssp]") {
    auto d = cyclical_d(17);
    CHECK_THAT(ssp_least_squares(exact_h1(d, 0.0)).zeta, WithinAbs(0.0, 1e-15));
    auto est = ssp_least_squares(exact_h1(d, 0.00245));
    CHECK_THAT(est.zeta, WithinAbs(0.00245, 1e-12));
    CHECK(est.method == Method::LeastSquares);
    CHECK(est.n == 17);
    CHECK(est.dof == 16);
    CHECK_THAT(est.s * (1.0 + est.zeta), WithinAbs(1.0, 1e-12));
    CHECK(est.chi2 >= 0.0);
}

TEST_CASE("least squares zeta matches the grid-search oracle", "[steady_state][ssp][oracle]") {
    synth::Scenario sc;
    sc.n_quarters = 50;
    sc.zeta_true = 0.0206;
    sc.noise_sigma = 0.01;
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        sc.seed = seed;
        auto g = synth::generate(sc);
        auto est = ssp_least_squares(g.truth);
        double grid = oracle::grid_search_zeta(g.truth.d_values(), g.truth.f_values(), -0.1, 0.1, 1e-6);
        CHECK(std::fabs(est.zeta - grid) <= 1e-6);
    }
}

TEST_CASE("least squares zeta is a strict minimum", "[steady_state][ssp][property]") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.01);
    auto d = cyclical_d(30);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> f;
        for (double dk : d) f.push_back((dk + 0.01) / (1.0 - dk) + noise(rng));
        auto rs = make_rates(d, f);
        double z = ssp_least_squares(rs).zeta;
        auto sse = [&](double zz) {
            double s = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) s += std::pow(f[k] - expected_growth(d[k], zz), 2);
            return s;
        };
        REQUIRE(sse(z + 1e-4) > sse(z));
        REQUIRE(sse(z - 1e-4) > sse(z));
    }
}

TEST_CASE("steady-state equation root", "[steady_state][irr]") {
    SECTION("unit factors give s = 1") {
        for (int n : {2, 3, 17, 49}) {
            std::vector<double> a(n, 1.0);
            CHECK_THAT(solve_discount_factor(a), WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("uniform factors: u + u^2 + u^3 = 3 with u = 1.02 s has the root u = 1") {
        std::vector<double> a{1.02, 1.02, 1.02};
        CHECK_THAT(solve_discount_factor(a), WithinAbs(1.0 / 1.02, 1e-12));
    }
    SECTION("two intervals against the quadratic formula") {
        // a1 s + a1 a2 s^2 = 2
        for (auto [a1, a2] : {std::pair{1.02, 0.97}, std::pair{0.95, 1.08}, std::pair{1.3, 1.1}}) {
            double qa = a1 * a2, qb = a1, qc = -2.0;
            double root = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
            std::vector<double> a{a1, a2};
            CHECK_THAT(solve_discount_factor(a), WithinAbs(root, 1e-12));
        }
    }
    SECTION("random factors against bisection alone") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(0.9, 1.1);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> a(17);
            for (auto& v : a) v = u(rng);
            double s = solve_discount_factor(a);
            double ref = oracle::bisect_discount_factor(a, 1e-12);
            REQUIRE_THAT(s, WithinAbs(ref, 1e-10));
            std::vector<double> c = cumulative_factors(a);
            REQUIRE(std::fabs(steady_state_residual(c, s).first) < 1e-12);
        }
    }
    SECTION("residual is strictly increasing in s") {
        std::vector<double> c = cumulative_factors(std::vector<double>{0.95, 1.05, 1.01, 0.99});
        double prev = steady_state_residual(c, 0.0).first;
        CHECK(prev == -4.0);
        for (double s = 0.05; s < 3.0; s += 0.05) {
            double v = steady_state_residual(c, s).first;
            CHECK(v > prev);
            prev = v;
        }
    }
    SECTION("errors") {
        CHECK_THROWS_AS(solve_discount_factor(std::vector<double>{1.0}), Error);
        CHECK_THROWS_AS(solve_discount_factor(std::vector<double>{1.0, 0.0}), Error);
        try {
            solve_discount_factor(std::vector<double>{0.01, 0.01, 0.01});
            FAIL("expected bracketing failure");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Numeric);
        }
    }
}

TEST_CASE("both estimators recover zeta on exact data", "[steady_state][property]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dd(0.0, 0.05), zz(-0.01, 0.03);
    std::uniform_int_distribution<int> len(2, 60);
    for (int trial = 0; trial < 200; ++trial) {
        int n = len(rng);
        std::vector<double> d(n);
        for (auto& v : d) v = dd(rng);
        double zeta = zz(rng);
        auto rs = exact_h1(d, zeta);
        REQUIRE_THAT(ssp_least_squares(rs).zeta, WithinAbs(zeta, 1e-10));
        auto irr = ssp_irr_root(rs);
        REQUIRE_THAT(irr.zeta, WithinAbs(zeta, 1e-10));
        REQUIRE(irr.method == Method::IrrRoot);
        REQUIRE_THAT(irr.s * (1.0 + irr.zeta), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("estimators need two points", "[steady_state]") {
    auto rs = make_rates({0.004}, {0.006});
    CHECK_THROWS_AS(ssp_least_squares(rs), Error);
    CHECK_THROWS_AS(ssp_irr_root(rs), Error);
}

TEST_CASE("chi-squared reference scale selection", "[steady_state][chi2]") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.01);
    auto d = cyclical_d(17);
    std::vector<double> f;
    for (double dk : d) f.push_back(expected_growth(dk, 0.00245) + noise(rng));
    auto rs = make_rates(d, f);

    auto est = ssp_least_squares(rs);
    CHECK(est.sigma_ref_source == SigmaRefSource::OlsResidual);
    CHECK_THAT(est.sigma_ref, WithinRel(ols::fit(rs.d_values(), rs.f_values()).s_resid, 1e-15));
    CHECK_THAT(est.chi2, WithinRel(16.0 * est.s_resid * est.s_resid / (est.sigma_ref * est.sigma_ref), 1e-12));

    auto over = ssp_least_squares(rs, SspOptions{0.01});
    CHECK(over.sigma_ref_source == SigmaRefSource::Override);
    CHECK_THAT(over.chi2, WithinRel(16.0 * est.s_resid * est.s_resid / 1e-4, 1e-12));
    CHECK_THROWS_AS(ssp_least_squares(rs, SspOptions{0.0}), Error);

    // constant d: no regression, fall back to the estimate's own scale
    std::vector<double> dc(5, 0.004), fc{0.01, 0.0, 0.005, 0.012, -0.002};
    auto flat = ssp_least_squares(make_rates(dc, fc));
    CHECK(flat.sigma_ref_source == SigmaRefSource::OwnResidual);
    CHECK_THAT(flat.chi2, WithinRel(4.0, 1e-12));

    // two points: OLS undefined
    auto pair = ssp_least_squares(make_rates({0.004, 0.005}, {0.01, 0.0}));
    CHECK(pair.sigma_ref_source == SigmaRefSource::OwnResidual);

    // all residuals vanish
    auto exact = ssp_least_squares(make_rates(std::vector<double>(5, 0.0), std::vector<double>(5, 0.5)));
    CHECK(exact.zeta == 0.5);
    CHECK(exact.sigma_ref_source == SigmaRefSource::None);
    CHECK(exact.chi2 == 0.0);
    CHECK(exact.p_value == 1.0);
}

TEST_CASE("chi_squared", "[steady_state][chi2]") {
    std::vector<double> obs{1.0, 2.0, 3.0}, same{1.0, 2.0, 3.0}, shifted{1.5, 2.5, 3.5};
    auto zero = chi_squared(obs, same, 0.1);
    CHECK(zero.chi2 == 0.0);
    CHECK(zero.dof == 2);
    CHECK_THAT(chi_squared(obs, shifted, 0.5).chi2, WithinAbs(3.0, 1e-15));
    CHECK_THROWS_AS(chi_squared(obs, same, 0.0), Error);
    CHECK_THROWS_AS(chi_squared(obs, std::vector<double>{1.0, 2.0}, 1.0), Error);
}

TEST_CASE("chi-squared p-value", "[steady_state][chi2][oracle]") {
    CHECK(chi2_p_value(0.0, 16) == 1.0);
    CHECK_THAT(chi2_p_value(2.0 * std::log(2.0), 2), WithinAbs(0.5, 1e-14));
    // dof = 2 is the exponential tail exp(-x/2)
    for (double x : {0.1, 1.0, 5.0, 20.0}) CHECK_THAT(chi2_p_value(x, 2), WithinAbs(std::exp(-x / 2), 1e-13));

    double p = chi2_p_value(37.47, 16);
    CHECK(p < 0.005);
    CHECK_THAT(p, WithinAbs(oracle::chi2_tail_quadrature(37.47, 16), 1e-10));
    CHECK_THAT(p, WithinAbs(0.0018, 5e-5));

    for (int dof : {1, 3, 5, 16, 48, 100})
        for (double x : {0.5, 3.0, 15.0, 37.47, 106.66}) {
            INFO("dof=" << dof << " x=" << x);
            CHECK_THAT(chi2_p_value(x, dof), WithinAbs(oracle::chi2_tail_quadrature(x, dof), 1e-9));
        }
    CHECK_THROWS_AS(chi2_p_value(1.0, 0), Error);
    CHECK_THROWS_AS(chi2_p_value(-1.0, 3), Error);
}

TEST_CASE("trajectory", "[steady_state][trajectory]") {
    SECTION("exact steady state keeps the index at 1") {
        auto tr = trajectory(exact_h1(cyclical_d(17), 0.00245), 0.00245);
        REQUIRE(tr.size() == 17);
        for (const auto& t : tr) {
            CHECK_THAT(t.cumulative_index, WithinAbs(1.0, 1e-12));
            CHECK_THAT(t.f_expected, WithinAbs(t.f_observed, 1e-15));
        }
        CHECK(tr[0].direction == Direction::None);
    }
    SECTION("single interval") {
        auto tr = trajectory(make_rates({0.005}, {0.02}), 0.0);
        CHECK_THAT(tr[0].cumulative_index, WithinAbs(1.02 * 0.995, 1e-15));
        CHECK_THAT(tr[0].cumulative_index, WithinAbs(1.0149, 1e-12));
    }
    SECTION("direction follows the change in f") {
        auto tr = trajectory(make_rates({0.004, 0.004, 0.004, 0.004}, {0.01, 0.02, 0.015, 0.015}), 0.0);
        CHECK(tr[1].direction == Direction::Rising);
        CHECK(tr[2].direction == Direction::Falling);
        CHECK(tr[3].direction == Direction::Flat);
        auto csv = emit_trajectory_csv(tr);
        CHECK(csv.rfind("quarter,d,f_observed,f_expected,cumulative_index,direction\n", 0) == 0);
        CHECK(csv.find(",rising\n") != std::string::npos);
    }
    SECTION("noisy data stays near the steady state") {
        synth::Scenario sc;
        sc.zeta_true = 0.00245;
        sc.noise_sigma = 0.01;
        int inside = 0;
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            sc.seed = seed;
            auto g = synth::generate(sc);
            auto est = ssp_least_squares(g.truth);
            double last = trajectory(g.truth, est.zeta).back().cumulative_index;
            inside += last >= 0.9 && last <= 1.1;
        }
        CHECK(inside == 200);
    }
}

TEST_CASE("chi-squared calibration under the correct model", "[steady_state][chi2][property]") {
    synth::Scenario sc;
    sc.zeta_true = 0.00245;
    sc.noise_sigma = 0.005;
    const double band = 3.0 * std::sqrt(2.0 / 16.0);
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        sc.seed = seed;
        auto g = synth::generate(sc);
        auto est = ssp_least_squares(g.truth, SspOptions{sc.noise_sigma});
        REQUIRE(est.dof == 16);
        ok += std::fabs(est.chi2 / est.dof - 1.0) <= band;
    }
    CHECK(ok >= 190);
}
