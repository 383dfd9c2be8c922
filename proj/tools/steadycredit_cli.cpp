// steadycredit: command-line front end for the credit steady-state analysis.
//
// Exit codes: 0 success, 1 validation / analysis error, 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <steadycredit/steadycredit.hpp>

namespace sc = steadycredit;
using sc::json_io::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowFlags {
    std::string name;
    std::string from, to;
    bool inclusive_from = false;
    bool inclusive_to = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--window", name, "Named window: pre2008 or crisis");
        cmd->add_option("--from", from, "Window start quarter (YYYY-Qn)");
        cmd->add_option("--to", to, "Window end quarter (YYYY-Qn)");
        cmd->add_flag("--inclusive-from", inclusive_from, "Include the start quarter");
        cmd->add_flag("--inclusive-to", inclusive_to, "Include the end quarter");
    }

    std::optional<sc::Window> resolve() const {
        if (!name.empty()) {
            if (!from.empty() || !to.empty()) throw UsageError("--window cannot be combined with --from/--to");
            try {
                return sc::named_window(name);
            } catch (const sc::Error& e) {
                throw UsageError(e.what());
            }
        }
        if (from.empty() && to.empty()) return std::nullopt;
        if (from.empty() || to.empty()) throw UsageError("--from and --to must be given together");
        try {
            return sc::Window{sc::Quarter::parse(from), sc::Quarter::parse(to), inclusive_from, inclusive_to};
        } catch (const sc::Error& e) {
            throw UsageError(e.what());
        }
    }
};

struct GapFlags {
    sc::basel_gap::GapConfig cfg;

    void attach(CLI::App* cmd) {
        cmd->add_option("--lambda", cfg.lambda, "HP smoothing parameter")->capture_default_str();
        cmd->add_option("--gap-low", cfg.gap_low, "Gap (pp) where the buffer starts")->capture_default_str();
        cmd->add_option("--gap-high", cfg.gap_high, "Gap (pp) where the buffer is maximal")->capture_default_str();
        cmd->add_option("--buffer-max", cfg.buffer_max, "Maximum buffer add-on (fraction)")->capture_default_str();
    }
};

sc::CreditSeries load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sc::Error(sc::ErrorKind::Parse, "cannot open input '" + path + "'");
    return sc::parse_csv(in);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sc::Error(sc::ErrorKind::Parse, "cannot open output '" + path + "'");
    out << text;
    if (!out) throw sc::Error(sc::ErrorKind::Parse, "failed writing '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

sc::GrowthMode parse_mode(const std::string& m) {
    if (m == "prefer-loans") return sc::GrowthMode::PreferLoans;
    if (m == "balance-identity") return sc::GrowthMode::ForceBalanceIdentity;
    throw UsageError("--f-mode must be prefer-loans or balance-identity");
}

// Series restricted to the window's own quarters (no look-back).
sc::CreditSeries window_slice(const sc::CreditSeries& s, const std::optional<sc::Window>& w) {
    return w ? sc::slice(s, *w) : s;
}

sc::RateSeries window_rates(const sc::CreditSeries& s, const std::optional<sc::Window>& w,
                            const sc::RatesConfig& cfg) {
    return sc::credit_growth_rates(w ? sc::window_series(s, *w).series : s, cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Credit growth steady-state analysis of quarterly credit-register series"};
    app.require_subcommand(1, 1);

    std::string input, out_path, json_path, scenario_path, f_mode = "prefer-loans", kind = "exhibit2";
    std::string series_name = "tcu", csv_path, trajectory_path;
    std::optional<double> sigma_ref;
    std::optional<std::uint64_t> seed;
    double epsilon = 0.0;
    WindowFlags wf;
    GapFlags gf;

    auto add_input = [&](CLI::App* c) { c->add_option("--input", input, "Credit register CSV")->required(); };
    auto add_json = [&](CLI::App* c) {
        c->add_option("--json", json_path, "Write JSON here (default: standard output)")->expected(0, 1);
    };
    auto add_fmode = [&](CLI::App* c) {
        c->add_option("--f-mode", f_mode, "prefer-loans or balance-identity")->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "Parse and validate a credit register CSV");
    add_input(validate);

    auto* rates = app.add_subcommand("rates", "Default and credit growth rates as CSV");
    add_input(rates);
    wf.attach(rates);
    add_fmode(rates);
    rates->add_option("--out", out_path, "Output CSV (default: standard output)");

    auto* ols = app.add_subcommand("ols", "Regression of credit growth on default rate");
    add_input(ols);
    wf.attach(ols);
    add_fmode(ols);
    add_json(ols);

    auto* ssp = app.add_subcommand("ssp", "Steady-state parameter estimates and chi-squared test");
    add_input(ssp);
    wf.attach(ssp);
    add_fmode(ssp);
    add_json(ssp);
    ssp->add_option("--sigma-ref", sigma_ref, "Chi-squared reference scale (default: OLS s for residual)");

    auto* cyc = app.add_subcommand("cycles", "Extrema, phases, amplitude and frequency of a series");
    add_input(cyc);
    wf.attach(cyc);
    add_fmode(cyc);
    add_json(cyc);
    cyc->add_option("--series", series_name, "tcu, d or f")->capture_default_str();
    cyc->add_option("--epsilon", epsilon, "Differences within epsilon count as zero")->capture_default_str();
    cyc->add_option("--csv", csv_path, "Also write per-point phase labels and extrema as CSV");

    auto* gap = app.add_subcommand("gap", "HP-filtered credit-to-GDP gap and buffer add-on as CSV");
    add_input(gap);
    wf.attach(gap);
    gf.attach(gap);
    gap->add_option("--out", out_path, "Output CSV (default: standard output)");

    auto* analyze = app.add_subcommand("analyze", "Full window analysis as JSON");
    add_input(analyze);
    wf.attach(analyze);
    gf.attach(analyze);
    add_fmode(analyze);
    add_json(analyze);
    analyze->add_option("--sigma-ref", sigma_ref, "Chi-squared reference scale (default: OLS s for residual)");
    analyze->add_option("--trajectory", trajectory_path, "Also write the steady-state trajectory as CSV");

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic credit register CSV");
    simulate->add_option("--scenario", scenario_path, "Scenario file (key=value lines)")->required();
    simulate->add_option("--seed", seed, "Random seed (overrides the scenario file)")->required();
    simulate->add_option("--out", out_path, "Output CSV (default: standard output)");

    auto* render = app.add_subcommand("render", "Render an SVG chart of a window analysis");
    add_input(render);
    wf.attach(render);
    add_fmode(render);
    render->add_option("--kind", kind, "exhibit1 (time series) or exhibit2 (scatter)")->capture_default_str();
    render->add_option("--out", out_path, "Output SVG (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const int precision = sc::json_io::precision_from_env();
        sc::RatesConfig rcfg;
        rcfg.f_mode = parse_mode(f_mode);
        const auto window = wf.resolve();

        if (*validate) {
            auto s = load_series(input);
            std::cout << "ok: " << s.size() << " quarters " << s.first().str() << ".." << s.last().str()
                      << (s.has_loans() ? "" : ", loans column incomplete")
                      << (s.has_gdp() ? "" : ", gdp column incomplete") << "\n";
        } else if (*rates) {
            auto s = load_series(input);
            write_output(out_path, sc::emit_rates_csv(window_rates(s, window, rcfg)));
        } else if (*ols) {
            auto r = window_rates(load_series(input), window, rcfg);
            auto fit = sc::ols::fit(r.d_values(), r.f_values());
            write_output(json_path, dump(sc::json_io::to_json(fit, precision)));
        } else if (*ssp) {
            auto r = window_rates(load_series(input), window, rcfg);
            sc::steady_state::SspOptions opt{sigma_ref};
            json j{{"first_interval_end", r.first.str()},
                   {"last_interval_end", r.last.str()},
                   {"least_squares", sc::json_io::to_json(sc::steady_state::ssp_least_squares(r, opt), precision)},
                   {"irr_root", sc::json_io::to_json(sc::steady_state::ssp_irr_root(r, opt), precision)}};
            write_output(json_path, dump(j));
        } else if (*cyc) {
            auto s = load_series(input);
            std::vector<double> values;
            std::vector<sc::Quarter> quarters;
            if (series_name == "tcu") {
                for (const auto& o : window_slice(s, window)) {
                    values.push_back(o.tcu);
                    quarters.push_back(o.quarter);
                }
            } else if (series_name == "d" || series_name == "f") {
                for (const auto& p : window_rates(s, window, rcfg).points) {
                    values.push_back(series_name == "d" ? p.d : p.f);
                    quarters.push_back(p.interval_end);
                }
            } else {
                throw UsageError("--series must be tcu, d or f");
            }
            sc::cycles::CycleOptions copt;
            copt.epsilon = epsilon;
            auto rep = sc::cycles::cycle_stats(values, quarters, copt);
            if (!csv_path.empty()) {
                std::ostringstream csv;
                csv << "index,quarter,value,phase,extremum\n";
                for (std::size_t i = 0; i < values.size(); ++i) {
                    std::string phase, ext;
                    if (i > 0 && i + 1 < values.size())
                        phase = std::string(sc::cycles::to_string(rep.phase_labels[i - 1]));
                    for (const auto& e : rep.extrema)
                        if (e.index == i) ext = std::string(sc::cycles::to_string(e.kind));
                    csv << i << ',' << quarters[i].str() << ',' << sc::detail::format_double(values[i]) << ','
                        << phase << ',' << ext << '\n';
                }
                write_output(csv_path, csv.str());
            }
            write_output(json_path, dump(sc::json_io::to_json(rep, precision)));
        } else if (*gap) {
            auto s = window_slice(load_series(input), window);
            write_output(out_path, sc::basel_gap::emit_gap_csv(sc::basel_gap::credit_gap(s, gf.cfg)));
        } else if (*analyze) {
            auto s = load_series(input);
            sc::AnalysisConfig cfg;
            cfg.rates = rcfg;
            cfg.gap = gf.cfg;
            cfg.ssp.sigma_ref = sigma_ref;
            auto rep = sc::analyze(s, window.value_or(sc::full_window(s)), cfg);
            if (!trajectory_path.empty())
                write_output(trajectory_path, sc::steady_state::emit_trajectory_csv(rep.trajectory));
            write_output(json_path, dump(sc::json_io::to_json(rep, precision)));
        } else if (*simulate) {
            std::ifstream in(scenario_path);
            if (!in) throw sc::Error(sc::ErrorKind::Parse, "cannot open scenario '" + scenario_path + "'");
            auto scenario = sc::synth::parse_scenario(in);
            scenario.seed = *seed;
            write_output(out_path, sc::emit_csv(sc::synth::generate(scenario).series));
        } else if (*render) {
            sc::svg::Exhibit ex;
            if (kind == "exhibit1") ex = sc::svg::Exhibit::TimeSeries;
            else if (kind == "exhibit2") ex = sc::svg::Exhibit::Scatter;
            else throw UsageError("--kind must be exhibit1 or exhibit2");
            auto s = load_series(input);
            sc::AnalysisConfig cfg;
            cfg.rates = rcfg;
            auto rep = sc::analyze(s, window.value_or(sc::full_window(s)), cfg);
            write_output(out_path, sc::svg::render_svg(rep, ex));
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sc::Error& e) {
        std::cerr << "error (" << sc::to_string(e.kind()) << "): " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
