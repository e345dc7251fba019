// Command-line front end: check-model, simulate, sweep, backtest.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gstatarb/backtest.hpp"
#include "gstatarb/errors.hpp"
#include "gstatarb/format.hpp"
#include "gstatarb/harness.hpp"
#include "gstatarb/model_io.hpp"

using namespace gstatarb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSaExists = 2;
constexpr int kExitNotCertified = 3;
constexpr int kExitAllSkipped = 4;

struct SimOptions {
    double mu = 0.1241;
    double sigma = 0.0837;
    double s0 = 2186.0;
    double horizon = 1.0;
    int steps = 1000;
    std::size_t runs = 10000;
    std::uint64_t seed = 1;
    std::string strategy = "embedded";
    double c_mult = 0.01;
    double c_fixed = 0.0;
    double alpha = 0.0;
    std::string mode = "observed";
    unsigned workers = 0;
    std::string out;
    std::string runs_out;
    std::string hist_out;
    std::size_t bins = 50;
    std::string format = "csv";
};

void add_sim_options(CLI::App* cmd, SimOptions& o) {
    cmd->add_option("--mu", o.mu, "drift per year");
    cmd->add_option("--sigma", o.sigma, "volatility per sqrt(year)")->check(CLI::PositiveNumber);
    cmd->add_option("--s0", o.s0, "start price")->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", o.horizon, "years")->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o.steps, "grid steps")->check(CLI::PositiveNumber);
    cmd->add_option("--runs", o.runs, "number of runs")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed")->envname("STATARB_SEED");
    cmd->add_option("--strategy", o.strategy, "embedded, trend or gfin")
        ->check(CLI::IsMember({"embedded", "trend", "gfin"}));
    cmd->add_option("--c-mult", o.c_mult, "c = k |mu| / sigma")->check(CLI::PositiveNumber);
    cmd->add_option("--c", o.c_fixed, "fixed c, overrides --c-mult")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", o.alpha, "target payoff on the reversal path")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--mode", o.mode, "snap or observed")->check(CLI::IsMember({"snap", "observed"}));
    cmd->add_option("--workers", o.workers, "worker threads, 0 = all cores");
    cmd->add_option("--out", o.out, "summary table output file");
    cmd->add_option("--format", o.format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));
}

ExperimentConfig to_config(const SimOptions& o) {
    ExperimentConfig cfg;
    cfg.params = {o.mu, o.sigma, o.s0, o.horizon, o.steps};
    cfg.strategy.kind = o.strategy == "trend"  ? StrategyKind::FollowTrend
                        : o.strategy == "gfin" ? StrategyKind::GFin
                                               : StrategyKind::EmbeddedBinomial;
    cfg.strategy.c_rule = o.c_fixed > 0.0 ? CRule::fixed(o.c_fixed) : CRule::drift_ratio(o.c_mult);
    cfg.strategy.alpha = o.alpha;
    cfg.strategy.mode = o.mode == "snap" ? ExecutionMode::Snap : ExecutionMode::Observed;
    cfg.n_runs = o.runs;
    cfg.master_seed = o.seed;
    cfg.workers = o.workers;
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
}

void emit_table(const std::vector<std::pair<std::string, MetricsSummary>>& rows,
                const ExperimentConfig& cfg, const SimOptions& o, const Metadata& meta) {
    std::ostringstream table;
    if (o.format == "markdown")
        write_summary_markdown(rows, cfg.params.horizon, table);
    else
        write_summary_csv(rows, cfg.params.horizon, meta, table);
    std::cout << table.str();
    if (!o.out.empty()) {
        auto f = open_out(o.out);
        if (o.format == "markdown") write_metadata(meta, f);
        f << table.str();
    }
}

int cmd_check_model(const std::string& model_file, const std::string& builtin) {
    if (model_file.empty() == builtin.empty()) {
        std::cerr << "check-model needs exactly one of --model or --builtin\n";
        return kExitUsage;
    }
    const ModelSpec spec = model_file.empty() ? builtin_model(builtin) : load_model_file(model_file);
    std::cout << std::setprecision(6);

    auto print_cert = [](const NsaCertificate& cert) {
        std::cout << "status=" << to_string(cert.status) << '\n';
        for (const auto& [k, v] : cert.diagnostics) std::cout << k << '=' << v << '\n';
    };
    auto print_strategy = [](const StrategyVector& s) {
        std::cout << "phi=(" << s.phi1 << ',' << s.phi2_up << ',' << s.phi2_down;
        if (s.phi3) std::cout << ',' << *s.phi3;
        std::cout << ")\n";
    };
    auto exit_for = [](NsaStatus s) {
        return s == NsaStatus::NsaCertified ? kExitOk
               : s == NsaStatus::SaExists   ? kExitSaExists
                                            : kExitNotCertified;
    };

    if (const auto* m = std::get_if<TwoPeriodBinomial>(&spec.model)) {
        std::cout << "model=binomial\n";
        const auto cert = nsa_binomial(*m);
        print_cert(cert);
        if (cert.status == NsaStatus::SaExists) print_strategy(solve_binomial_sa(*m));
        return exit_for(cert.status);
    }
    if (const auto* m = std::get_if<TrinomialTopModel>(&spec.model)) {
        std::cout << "model=trinomial\n";
        const auto cert = trinomial_nsa(*m);
        print_cert(cert);
        try {
            const auto pid = counterexample_pid_check(*m);
            std::cout << "pid_candidate=(";
            for (std::size_t i = 0; i < 6; ++i) std::cout << (i ? "," : "") << pid.candidate[i];
            std::cout << ")\npid_is_valid_emm=" << (pid.is_valid_emm ? "true" : "false") << '\n';
        } catch (const NoSolution& e) {
            std::cout << "pid_candidate=none (" << e.what() << ")\n";
        }
        return exit_for(cert.status);
    }
    const auto& m = std::get<TrendLattice>(spec.model);
    std::cout << "model=trend\norientation=" << to_string(m.orientation()) << '\n';
    const auto cert = nsa_binomial(m.embedded_binomial());
    print_cert(cert);
    if (cert.status == NsaStatus::SaExists) {
        std::cout << "trend_strategy:\n";
        print_strategy(trend_strategy(m, spec.alpha));
        try {
            const auto g = gfin_strategy(m, spec.alpha);
            std::cout << "gfin_strategy:\n";
            print_strategy(g);
        } catch (const InvalidModel& e) {
            std::cout << "gfin_strategy=unavailable (" << e.what() << ")\n";
        }
    }
    return exit_for(cert.status);
}

int cmd_simulate(const SimOptions& o) {
    const ExperimentConfig cfg = to_config(o);
    const ExperimentResult res = run_experiment(cfg);
    const Metadata meta = experiment_metadata(cfg);
    emit_table({{"base", res.summary}}, cfg, o, meta);
    if (!o.runs_out.empty()) {
        auto f = open_out(o.runs_out);
        write_runs_csv(res.runs, meta, f);
    }
    if (!o.hist_out.empty()) {
        std::vector<double> pnl;
        for (const auto& r : res.runs)
            if (r.ended_by != EndReason::Skipped) pnl.push_back(r.pnl);
        auto f = open_out(o.hist_out);
        write_histogram_csv(histogram(pnl, o.bins), meta, f);
    }
    return kExitOk;
}

int cmd_sweep(const SimOptions& o, const std::string& axis_name, const std::string& values_csv) {
    const SweepAxis axis = parse_axis(axis_name);
    std::vector<double> values;
    std::stringstream ss(values_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_double(item);
        if (!v) throw CLI::ValidationError("--values", "not a number: '" + item + "'");
        values.push_back(*v);
    }
    if (values.empty()) throw CLI::ValidationError("--values", "empty list");
    const ExperimentConfig cfg = to_config(o);
    const auto rows = sweep(cfg, axis, values);
    Metadata meta = experiment_metadata(cfg);
    meta.emplace_back("axis", to_string(axis));
    std::vector<std::pair<std::string, MetricsSummary>> table;
    for (const auto& r : rows) table.emplace_back(format_double(r.value), r.summary);
    emit_table(table, cfg, o, meta);
    return kExitOk;
}

int cmd_backtest(const std::string& data, const BacktestConfig& cfg, const std::string& out,
                 const std::string& cycles_out) {
    const MarketSeries series = load_csv_file(data);
    const BacktestResult res = run_backtest(series, cfg);
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(backtest_summary_json(res));
    std::cout << j.dump(2) << '\n';
    if (!out.empty()) {
        j["metadata"] = {{"version", kVersion},
                         {"execution_mode", "observed"},
                         {"alpha", cfg.alpha},
                         {"dt", cfg.dt},
                         {"variance_denominator", "n-1"},
                         {"data", data}};
        auto f = open_out(out);
        f << j.dump(2) << '\n';
    }
    if (!cycles_out.empty()) {
        auto f = open_out(cycles_out);
        write_metadata({{"version", kVersion},
                        {"execution_mode", "observed"},
                        {"window_days", std::to_string(cfg.window_days)},
                        {"boundary_fraction", format_double(cfg.boundary_fraction)},
                        {"alpha", format_double(cfg.alpha)}},
                       f);
        write_cycles_csv(res, f);
    }
    return kExitOk;
}

int cmd_synth(double mu, double sigma, double years, double s0, std::uint64_t seed, const std::string& out) {
    const auto n = static_cast<std::size_t>(std::llround(years * 252.0)) + 1;
    const MarketSeries series = synthetic_series(mu, sigma, n, seed, s0);
    std::ostringstream body;
    write_metadata({{"version", kVersion},
                    {"source", "synthetic-gbm"},
                    {"mu", format_double(mu)},
                    {"sigma", format_double(sigma)},
                    {"seed", std::to_string(seed)}},
                   body);
    dump_csv(series, body);
    if (out.empty()) {
        std::cout << body.str();
    } else {
        auto f = open_out(out);
        f << body.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statistical arbitrage lattice and simulation toolkit"};
    app.require_subcommand(1);

    std::string model_file, builtin;
    auto* check = app.add_subcommand("check-model", "certify a lattice model");
    check->add_option("--model", model_file, "JSON model file");
    check->add_option("--builtin", builtin, "sec34 or bondarenko-counterexample");

    SimOptions sim, sw;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiment");
    add_sim_options(simulate, sim);
    simulate->add_option("--runs-out", sim.runs_out, "per-run CSV");
    simulate->add_option("--hist", sim.hist_out, "P&L histogram CSV");
    simulate->add_option("--bins", sim.bins, "histogram bins")->check(CLI::PositiveNumber);

    std::string axis, values;
    auto* sweep_cmd = app.add_subcommand("sweep", "experiment per axis value");
    add_sim_options(sweep_cmd, sw);
    sweep_cmd->add_option("--axis", axis, "c, mu, sigma, eta-mu, eta-sigma or alpha")
        ->required()
        ->check(CLI::IsMember({"c", "mu", "sigma", "eta-mu", "eta-sigma", "alpha"}));
    sweep_cmd->add_option("--values", values, "comma-separated values")->required();

    std::string data, bt_out, cycles_out;
    BacktestConfig bt;
    auto* backtest = app.add_subcommand("backtest", "walk-forward backtest on daily closes");
    backtest->add_option("--data", data, "CSV with header date,close")->required();
    backtest->add_option("--window", bt.window_days, "estimation window in observations");
    backtest->add_option("--boundary", bt.boundary_fraction, "barrier step as a fraction of the anchor");
    backtest->add_option("--alpha", bt.alpha, "target payoff on the reversal path")
        ->check(CLI::NonNegativeNumber);
    backtest->add_option("--dt", bt.dt, "years per observation")->check(CLI::PositiveNumber);
    backtest->add_option("--out", bt_out, "summary JSON file");
    backtest->add_option("--cycles-out", cycles_out, "per-cycle CSV");

    double syn_mu = 0.12, syn_sigma = 0.08, syn_years = 18, syn_s0 = 100;
    std::uint64_t syn_seed = 1;
    std::string syn_out;
    auto* synth = app.add_subcommand("synth", "synthetic daily GBM closes as date,close CSV");
    synth->add_option("--mu", syn_mu, "drift");
    synth->add_option("--sigma", syn_sigma, "volatility")->check(CLI::PositiveNumber);
    synth->add_option("--years", syn_years, "length in years of 252 observations")
        ->check(CLI::PositiveNumber);
    synth->add_option("--s0", syn_s0, "first close")->check(CLI::PositiveNumber);
    synth->add_option("--seed", syn_seed, "RNG seed");
    synth->add_option("--out", syn_out, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*check) return cmd_check_model(model_file, builtin);
        if (*simulate) return cmd_simulate(sim);
        if (*sweep_cmd) return cmd_sweep(sw, axis, values);
        if (*backtest) return cmd_backtest(data, bt, bt_out, cycles_out);
        if (*synth) return cmd_synth(syn_mu, syn_sigma, syn_years, syn_s0, syn_seed, syn_out);
    } catch (const AllRunsSkipped& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAllSkipped;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
