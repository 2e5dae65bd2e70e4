#include "idrisk/bounds.hpp"
#include "idrisk/config.hpp"
#include "idrisk/error.hpp"
#include "idrisk/experiments.hpp"
#include "idrisk/report.hpp"
#include "idrisk/sampler.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace idrisk;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::string plot_data;
    std::uint64_t seed = kDefaultSeed;
    std::size_t trials = kDefaultTrials;
    unsigned workers = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_trials) {
    cmd->add_option("--config", c.config, "JSON file with a triplet and/or family");
    cmd->add_option("--out", c.out, "output path (stdout when omitted)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--workers", c.workers, "worker threads (0 = hardware)");
    if (with_trials) {
        cmd->add_option("--trials", c.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
        cmd->add_option("--plot-data", c.plot_data, "write two-column series for plotting");
    }
}

ConfigDocument load(const Common& c) {
    return c.config.empty() ? ConfigDocument{} : load_config(c.config);
}

GeneratingTriplet triplet_of(const ConfigDocument& doc) {
    return doc.triplet ? *doc.triplet : standard_triplet();
}

LipschitzRampFamily family_of(const ConfigDocument& doc) {
    return doc.family ? *doc.family : standard_family();
}

void emit(const Common& c, const std::string& csv, const nlohmann::json& json) {
    const std::string text = c.format == "json" ? json.dump(2) + "\n" : csv;
    if (c.out.empty()) {
        std::cout << text;
        std::cout.flush();
    } else {
        write_text_file(c.out, text);
    }
}

void emit_plot(const Common& c, const std::vector<Series>& series) {
    if (!c.plot_data.empty()) write_text_file(c.plot_data, plot_data(series));
}

double parse_real(const std::string& text, const char* name) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw DomainError(std::string(name) + ": not a number: '" + text + "'");
    }
    return v;
}

std::vector<double> xi_values(const std::optional<double>& xi, const std::vector<double>& grid,
                              std::vector<double> fallback) {
    if (xi) return {*xi};
    if (!grid.empty()) return grid;
    return fallback;
}

struct BoundArgs {
    std::string method = "integral";
    std::optional<double> xi;
    std::vector<double> xi_grid;
    std::optional<double> V;
    std::optional<std::string> R;
    double lambda = 1.0;
    std::size_t n = 1;
    double ln_cov = 0.0;
    double A = 0.0;
    double B = 1.0;
};

void run_bound(const Common& c, const BoundArgs& a) {
    const BoundMethod method = parse_bound_method(a.method);
    const auto xis = xi_values(a.xi, a.xi_grid, {});
    if (xis.empty()) throw DomainError("bound: --xi or --xi-grid is required");
    if (!(a.lambda > 0.0)) throw DomainError("bound: --lambda must be positive");
    if (a.n == 0) throw DomainError("bound: --N must be at least 1");
    const auto doc = load(c);

    std::vector<BoundReport> reports;
    if (method == BoundMethod::integral || method == BoundMethod::risk_integral) {
        const TauContext ctx(triplet_of(doc).measure(), a.lambda, a.n);
        for (double xi : xis) {
            reports.push_back(method == BoundMethod::integral
                                  ? deviation_bound_integral(ctx, xi)
                                  : risk_bound_integral(ctx, xi, a.ln_cov, a.A, a.B));
        }
    } else {
        const auto triplet = triplet_of(doc);
        const double V = a.V ? *a.V : second_moment(triplet.measure());
        const double R = a.R ? parse_real(*a.R, "--R") : support_radius(triplet.measure());
        for (double xi : xis) {
            reports.push_back(method == BoundMethod::closed
                                  ? deviation_bound_closed(xi, V, R, a.lambda, a.n)
                                  : risk_bound_closed(xi, a.n, a.ln_cov, V, R, a.lambda, a.A, a.B));
        }
    }
    emit(c, bound_reports_csv(reports), bound_reports_json(reports));
}

void run_xhat(const Common& c) {
    const auto r = find_xhat();
    const std::string csv = "quantity,value\nxhat," + format_number(r.xhat) + "\ngamma_max," +
                            format_number(r.gamma_max) + "\n";
    emit(c, csv, {{"xhat", r.xhat}, {"gamma_max", r.gamma_max}});
}

struct TailArgs {
    std::size_t n = 10;
    std::optional<double> xi;
    std::vector<double> xi_grid;
    bool risk = false;
    std::size_t cover_replicates = 200;
};

void run_tail(const Common& c, const TailArgs& a) {
    const auto doc = load(c);
    const auto triplet = triplet_of(doc);
    if (!a.risk) {
        const auto xis = xi_values(a.xi, a.xi_grid, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        const auto rows = bound_dominance_report(triplet, Identity{}, a.n, xis, c.trials, c.seed, c.workers);
        emit(c, dominance_csv(rows), dominance_json(rows));
        Series tail{"mc_tail", {}}, integral{"bound_integral", {}}, closed{"bound_closed", {}};
        for (const auto& r : rows) {
            tail.points.emplace_back(r.tail.xi, r.tail.point);
            integral.points.emplace_back(r.tail.xi, r.integral.value);
            closed.points.emplace_back(r.tail.xi, r.closed.value);
        }
        emit_plot(c, {tail, integral, closed});
        for (const auto& r : rows) {
            if (r.violation) std::cerr << "violation at xi = " << format_number(r.tail.xi) << "\n";
        }
        return;
    }
    const auto family = family_of(doc);
    const auto xis = xi_values(a.xi, a.xi_grid, {0.25, 0.5, 0.75, 1.0, 1.5, 2.0});
    const auto rows = risk_dominance_report(triplet, family, a.n, xis, c.trials, a.cover_replicates,
                                            c.seed, c.workers);
    emit(c, risk_dominance_csv(rows), risk_dominance_json(rows));
    Series tail{"mc_sup_tail", {}}, bound{"bound_risk_closed", {}};
    for (const auto& r : rows) {
        tail.points.emplace_back(r.tail.xi, r.tail.point);
        bound.points.emplace_back(r.tail.xi, r.closed.value);
    }
    emit_plot(c, {tail, bound});
    for (const auto& r : rows) {
        if (r.violation) std::cerr << "violation at xi = " << format_number(r.tail.xi) << "\n";
    }
}

struct RateArgs {
    std::optional<double> gamma;
    std::optional<double> ln_cov;
    double epsilon = 0.05;
    std::vector<std::size_t> n_grid;
    std::size_t cover_replicates = 200;
    std::size_t replicates = 2000;
};

void run_rate(const Common& c, const RateArgs& a) {
    const auto doc = load(c);
    RateSweepConfig cfg;
    if (!a.n_grid.empty()) cfg.n_grid = a.n_grid;
    if (!(a.epsilon > 0.0 && a.epsilon < 1.0)) throw DomainError("rate: --epsilon must lie in (0, 1)");
    cfg.epsilon = a.epsilon;
    cfg.gamma = a.gamma;
    cfg.ln_cov = a.ln_cov;
    cfg.cover_replicates = a.cover_replicates;
    cfg.mc_replicates = a.replicates;
    const auto result = rate_sweep(family_of(doc), triplet_of(doc), cfg, c.seed, c.workers);
    emit(c, rate_sweep_csv(result), rate_sweep_json(result));
    Series bound{"bound_radius", {}}, mc{"mc_sup_dev", {}};
    for (const auto& r : result.rows) {
        bound.points.emplace_back(static_cast<double>(r.n), r.bound_radius);
        mc.points.emplace_back(static_cast<double>(r.n), r.mc_sup_dev);
    }
    emit_plot(c, {bound, mc});
    std::cerr << "bound slope " << format_number(result.bound_slope) << ", measured slope "
              << format_number(result.mc_slope) << ", reference " << format_number(result.reference_slope)
              << "\nnote: " << result.note << "\n";
}

struct FigureArgs {
    double lo = 1.05;
    double hi = 500.0;
    std::size_t points = 1000;
};

void run_figures(const Common& c, const FigureArgs& a) {
    const auto [gamma, gamma_prime] = gamma_curves(a.lo, a.hi, a.points);
    std::string csv = "x,gamma,gamma_prime\n";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < gamma.points.size(); ++i) {
        const double x = gamma.points[i].first;
        csv += format_number(x) + "," + format_number(gamma.points[i].second) + "," +
               format_number(gamma_prime.points[i].second) + "\n";
        rows.push_back({{"x", x}, {"gamma", gamma.points[i].second},
                        {"gamma_prime", gamma_prime.points[i].second}});
    }
    emit(c, csv, rows);
    emit_plot(c, {gamma, gamma_prime});
}

void run_sample(const Common& c, std::size_t n) {
    if (n == 0) throw DomainError("sample: --N must be at least 1");
    const auto samples = sample_set(triplet_of(load(c)), n, c.seed, c.workers);
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto p = samples.point(i);
        points.push_back(std::vector<double>(p.begin(), p.end()));
    }
    emit(c, samples_csv(samples),
         {{"seed", samples.seed()}, {"triplet_id", samples.triplet_id()}, {"samples", points}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deviation and risk bounds for infinitely divisible samples"};
    app.require_subcommand(1);

    Common common;
    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "evaluate a deviation or risk bound");
    add_common(bound, common, false);
    bound->add_option("--method", bound_args.method, "integral, closed, risk_integral or risk_closed");
    bound->add_option("--xi", bound_args.xi, "deviation level");
    bound->add_option("--xi-grid", bound_args.xi_grid, "comma-separated deviation levels")->delimiter(',');
    bound->add_option("--V", bound_args.V, "second moment of the Levy measure");
    bound->add_option("--R", bound_args.R, "support radius (inf for unbounded)");
    bound->add_option("--lambda", bound_args.lambda, "Lipschitz constant");
    bound->add_option("--N", bound_args.n, "sample size");
    bound->add_option("--ln-cov", bound_args.ln_cov, "log expected covering number");
    bound->add_option("--A", bound_args.A, "lower end of the function range");
    bound->add_option("--B", bound_args.B, "upper end of the function range");

    auto* xhat = app.add_subcommand("xhat", "maximiser of the rate exponent");
    add_common(xhat, common, false);

    TailArgs tail_args;
    auto* tail = app.add_subcommand("tail", "Monte-Carlo tails against the bounds");
    add_common(tail, common, true);
    tail->add_option("--N", tail_args.n, "sample size")->check(CLI::PositiveNumber);
    tail->add_option("--xi", tail_args.xi, "deviation level");
    tail->add_option("--xi-grid", tail_args.xi_grid, "comma-separated deviation levels")->delimiter(',');
    tail->add_flag("--risk", tail_args.risk, "sup-deviation over the family against the risk bound");
    tail->add_option("--cover-replicates", tail_args.cover_replicates, "double samples for the covering term")
        ->check(CLI::PositiveNumber);

    RateArgs rate_args;
    auto* rate = app.add_subcommand("rate", "convergence-rate sweep over N");
    add_common(rate, common, true);
    rate->add_option("--gamma", rate_args.gamma, "fixed rate exponent");
    rate->add_option("--ln-cov", rate_args.ln_cov, "fixed log covering number");
    rate->add_option("--epsilon", rate_args.epsilon, "confidence parameter");
    rate->add_option("--N-grid", rate_args.n_grid, "comma-separated sample sizes")->delimiter(',');
    rate->add_option("--cover-replicates", rate_args.cover_replicates, "double samples for the covering term")
        ->check(CLI::PositiveNumber);
    rate->add_option("--replicates", rate_args.replicates, "Monte-Carlo replicates per N")
        ->check(CLI::PositiveNumber);

    FigureArgs figure_args;
    auto* figures = app.add_subcommand("figures", "gamma and gamma' curves");
    add_common(figures, common, true);
    figures->add_option("--lo", figure_args.lo, "left end of the x grid");
    figures->add_option("--hi", figure_args.hi, "right end of the x grid");
    figures->add_option("--points", figure_args.points, "grid size");

    std::size_t sample_n = 10;
    auto* sample = app.add_subcommand("sample", "draw a sample set");
    add_common(sample, common, false);
    sample->add_option("--N", sample_n, "sample size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*bound) run_bound(common, bound_args);
        else if (*xhat) run_xhat(common);
        else if (*tail) run_tail(common, tail_args);
        else if (*rate) run_rate(common, rate_args);
        else if (*figures) run_figures(common, figure_args);
        else if (*sample) run_sample(common, sample_n);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
