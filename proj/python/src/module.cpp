#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gstatarb/backtest.hpp"
#include "gstatarb/errors.hpp"
#include "gstatarb/gbm.hpp"
#include "gstatarb/harness.hpp"
#include "gstatarb/model_io.hpp"
#include "gstatarb/strategies.hpp"

namespace py = pybind11;
using namespace gstatarb;

namespace {

py::tuple strategy_tuple(const StrategyVector& s) {
    if (s.phi3) return py::make_tuple(s.phi1, s.phi2_up, s.phi2_down, *s.phi3);
    return py::make_tuple(s.phi1, s.phi2_up, s.phi2_down);
}

py::dict certificate_dict(const NsaCertificate& cert) {
    py::dict d;
    d["status"] = to_string(cert.status);
    d["diagnostics"] = cert.diagnostics;
    return d;
}

py::dict check_spec(const ModelSpec& spec) {
    if (const auto* m = std::get_if<TwoPeriodBinomial>(&spec.model)) {
        auto d = certificate_dict(nsa_binomial(*m));
        d["kind"] = "binomial";
        if (d["status"].cast<std::string>() == to_string(NsaStatus::SaExists))
            d["strategy"] = strategy_tuple(solve_binomial_sa(*m));
        return d;
    }
    if (const auto* m = std::get_if<TrinomialTopModel>(&spec.model)) {
        auto d = certificate_dict(trinomial_nsa(*m));
        d["kind"] = "trinomial";
        try {
            const auto pid = counterexample_pid_check(*m);
            d["pid_candidate"] = std::vector<double>(pid.candidate.begin(), pid.candidate.end());
            d["pid_is_valid_emm"] = pid.is_valid_emm;
        } catch (const NoSolution&) {
            d["pid_candidate"] = py::none();
            d["pid_is_valid_emm"] = false;
        }
        return d;
    }
    const auto& m = std::get<TrendLattice>(spec.model);
    const auto cert = nsa_binomial(m.embedded_binomial());
    auto d = certificate_dict(cert);
    d["kind"] = "trend";
    d["orientation"] = to_string(m.orientation());
    if (cert.status == NsaStatus::SaExists) {
        d["trend_strategy"] = strategy_tuple(trend_strategy(m, spec.alpha));
        try {
            d["gfin_strategy"] = strategy_tuple(gfin_strategy(m, spec.alpha));
        } catch (const InvalidModel&) {
            d["gfin_strategy"] = py::none();
        }
    }
    return d;
}

StrategyKind parse_kind(const std::string& s) {
    if (s == "embedded") return StrategyKind::EmbeddedBinomial;
    if (s == "trend") return StrategyKind::FollowTrend;
    if (s == "gfin") return StrategyKind::GFin;
    throw std::invalid_argument("strategy must be embedded, trend or gfin");
}

ExecutionMode parse_mode(const std::string& s) {
    if (s == "observed") return ExecutionMode::Observed;
    if (s == "snap") return ExecutionMode::Snap;
    throw std::invalid_argument("mode must be snap or observed");
}

ExperimentConfig make_config(double mu, double sigma, double s0, double horizon, int steps,
                             std::size_t runs, std::uint64_t seed, const std::string& strategy,
                             const std::string& mode, double c_mult, std::optional<double> c, double alpha,
                             unsigned workers) {
    ExperimentConfig cfg;
    cfg.params = {mu, sigma, s0, horizon, steps};
    cfg.strategy.kind = parse_kind(strategy);
    cfg.strategy.mode = parse_mode(mode);
    cfg.strategy.c_rule = c ? CRule::fixed(*c) : CRule::drift_ratio(c_mult);
    cfg.strategy.alpha = alpha;
    cfg.n_runs = runs;
    cfg.master_seed = seed;
    cfg.workers = workers;
    return cfg;
}

py::dict summary_dict(const MetricsSummary& m) {
    py::dict d;
    d["mean_gain"] = m.mean_gain;
    d["median_gain"] = m.median_gain;
    d["var95"] = m.var95;
    d["gain_per_trade"] = m.gain_per_trade;
    d["loss_fraction"] = m.loss_fraction;
    d["loss_mean"] = m.loss_mean;
    d["avg_n"] = m.avg_n;
    d["max_n"] = m.max_n;
    d["n_runs"] = m.n_runs;
    return d;
}

}  // namespace

PYBIND11_MODULE(_gstatarb, m) {
    m.doc() = "Statistical arbitrage lattice models, GBM simulation and backtests";
    m.attr("__version__") = kVersion;

    // Later registrations are tried first, so the base class goes first.
    const auto& base = py::register_exception<Error>(m, "Error");
    py::register_exception<NoSaExists>(m, "NoSaExists", base.ptr());
    py::register_exception<AllRunsSkipped>(m, "AllRunsSkipped", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<InvalidModel>(m, "InvalidModel", base.ptr());
    py::register_exception<InvalidInterval>(m, "InvalidInterval", base.ptr());

    m.def(
        "check_model", [](const std::string& text) { return check_spec(parse_model_json(text)); },
        py::arg("model_json"), "Certify a JSON lattice model; returns status, diagnostics and strategies.");
    m.def(
        "check_builtin", [](const std::string& name) { return check_spec(builtin_model(name)); },
        py::arg("name"));
    m.def("builtin_model_names", [] { return std::vector<std::string>{"sec34", "bondarenko-counterexample"}; });

    m.def("exit_prob_lower", &exit_prob_lower, py::arg("s0"), py::arg("a"), py::arg("b"), py::arg("mu"),
          py::arg("sigma"));
    m.def("exit_prob_upper", &exit_prob_upper, py::arg("s0"), py::arg("a"), py::arg("b"), py::arg("mu"),
          py::arg("sigma"));
    m.def("embedded_q", &embedded_q, py::arg("c"), py::arg("mu"), py::arg("sigma"));
    m.def(
        "embedded_phi",
        [](double c, double s0, double q) { return strategy_tuple(embedded_phi(c, s0, q)); }, py::arg("c"),
        py::arg("s0"), py::arg("q"));
    m.def(
        "mle_estimate",
        [](const std::vector<double>& closes, double dt) {
            const auto e = mle_estimate(closes, dt);
            return py::make_tuple(e.mu_hat, e.sigma_hat);
        },
        py::arg("closes"), py::arg("dt") = 1.0 / 252.0);

    m.def(
        "simulate",
        [](double mu, double sigma, double s0, double horizon, int steps, std::size_t runs, std::uint64_t seed,
           const std::string& strategy, const std::string& mode, double c_mult, std::optional<double> c,
           double alpha, unsigned workers) {
            const auto cfg =
                make_config(mu, sigma, s0, horizon, steps, runs, seed, strategy, mode, c_mult, c, alpha, workers);
            ExperimentResult res;
            {
                py::gil_scoped_release release;
                res = run_experiment(cfg);
            }
            py::dict d = summary_dict(res.summary);
            std::vector<double> pnl;
            std::vector<int> n;
            for (const auto& r : res.runs) {
                pnl.push_back(r.pnl);
                n.push_back(r.n);
            }
            d["pnl"] = pnl;
            d["n"] = n;
            d["skipped"] = res.skipped;
            return d;
        },
        py::arg("mu") = 0.1241, py::arg("sigma") = 0.0837, py::arg("s0") = 2186.0, py::arg("horizon") = 1.0,
        py::arg("steps") = 1000, py::arg("runs") = 10000, py::arg("seed") = 1, py::arg("strategy") = "embedded",
        py::arg("mode") = "observed", py::arg("c_mult") = 0.01, py::arg("c") = py::none(),
        py::arg("alpha") = 0.0, py::arg("workers") = 0u);

    m.def(
        "sweep",
        [](const std::string& axis, const std::vector<double>& values, double mu, double sigma, double s0,
           double horizon, int steps, std::size_t runs, std::uint64_t seed, const std::string& strategy,
           const std::string& mode, double c_mult, double alpha, unsigned workers) {
            const auto cfg = make_config(mu, sigma, s0, horizon, steps, runs, seed, strategy, mode, c_mult,
                                         std::nullopt, alpha, workers);
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = sweep(cfg, parse_axis(axis), values);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d = summary_dict(r.summary);
                d["value"] = r.value;
                out.append(d);
            }
            return out;
        },
        py::arg("axis"), py::arg("values"), py::arg("mu") = 0.1241, py::arg("sigma") = 0.0837,
        py::arg("s0") = 2186.0, py::arg("horizon") = 1.0, py::arg("steps") = 1000, py::arg("runs") = 10000,
        py::arg("seed") = 1, py::arg("strategy") = "embedded", py::arg("mode") = "observed",
        py::arg("c_mult") = 0.01, py::arg("alpha") = 0.0, py::arg("workers") = 0u);

    m.def(
        "backtest",
        [](const std::vector<std::string>& dates, const std::vector<double>& closes, std::size_t window,
           double boundary, double alpha, double dt) {
            MarketSeries series{dates, closes};
            if (dates.size() != closes.size()) throw std::invalid_argument("dates and closes differ in length");
            BacktestConfig cfg{window, boundary, alpha, dt};
            const auto r = run_backtest(series, cfg);
            py::dict d;
            d["gpta"] = r.gpta;
            d["total_pnl"] = r.total_pnl;
            d["traded_qty"] = r.traded_qty;
            d["final_position"] = r.final_position;
            py::list cycles;
            for (const auto& c : r.cycles) {
                py::dict row;
                row["cycle_start"] = c.cycle_start;
                row["cycle_end"] = c.cycle_end;
                row["mu_hat"] = c.mu_hat;
                row["sigma_hat"] = c.sigma_hat;
                row["orientation"] = to_string(c.orientation);
                row["pnl"] = c.pnl;
                row["traded_qty"] = c.traded_qty;
                cycles.append(row);
            }
            d["cycles"] = cycles;
            return d;
        },
        py::arg("dates"), py::arg("closes"), py::arg("window") = 756, py::arg("boundary") = 0.10,
        py::arg("alpha") = 0.0, py::arg("dt") = 1.0 / 252.0);

    m.def(
        "synthetic_series",
        [](double mu, double sigma, std::size_t n, std::uint64_t seed, double s0) {
            const auto s = synthetic_series(mu, sigma, n, seed, s0);
            return py::make_tuple(s.dates, s.closes);
        },
        py::arg("mu"), py::arg("sigma"), py::arg("n"), py::arg("seed"), py::arg("s0") = 100.0);

    m.def(
        "load_csv",
        [](const std::string& filename) {
            const auto s = load_csv_file(filename);
            return py::make_tuple(s.dates, s.closes);
        },
        py::arg("filename"));
}
