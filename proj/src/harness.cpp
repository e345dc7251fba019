#include "gstatarb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gstatarb/errors.hpp"
#include "gstatarb/format.hpp"

namespace gstatarb {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index) {
    return splitmix64(master_seed + (static_cast<std::uint64_t>(run_index) + 1) * kGolden);
}

void ExperimentConfig::validate() const {
    params.validate();
    if (n_runs < 1) throw std::invalid_argument("n_runs must be at least 1");
    if (!(strategy.alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    strategy.c_rule.resolve(params.mu, params.sigma);
}

MetricsSummary metrics(std::span<const double> pnl, std::span<const double> trades,
                       std::span<const double> n) {
    if (pnl.empty()) throw EmptySample("metrics need at least one run");
    if (trades.size() != pnl.size() || n.size() != pnl.size())
        throw std::invalid_argument("samples must have equal length");
    const std::size_t count = pnl.size();
    const double dn = static_cast<double>(count);

    std::vector<double> sorted(pnl.begin(), pnl.end());
    std::sort(sorted.begin(), sorted.end());

    MetricsSummary m;
    m.n_runs = count;
    double sum = 0.0, loss_sum = 0.0;
    std::size_t losses = 0;
    for (double v : sorted) {
        sum += v;
        if (v < 0.0) {
            ++losses;
            loss_sum += v;
        }
    }
    m.mean_gain = sum / dn;
    m.median_gain = sorted[(count - 1) / 2];
    const auto q_index = static_cast<std::size_t>(std::ceil(0.05 * dn));
    m.var95 = -sorted[std::max<std::size_t>(q_index, 1) - 1];
    m.loss_fraction = static_cast<double>(losses) / dn;
    m.loss_mean = losses ? loss_sum / static_cast<double>(losses) : 0.0;

    double n_sum = 0.0, n_max = 0.0;
    for (double v : n) {
        n_sum += v;
        n_max = std::max(n_max, v);
    }
    m.avg_n = n_sum / dn;
    m.max_n = n_max;
    m.gain_per_trade = m.avg_n > 0.0 ? m.mean_gain / m.avg_n : 0.0;
    return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult out;
    out.runs.resize(config.n_runs);

    PlanFn planner;
    try {
        planner = make_gbm_planner(config.params, config.strategy);
    } catch (const NoSaExists&) {
        throw AllRunsSkipped("q equals 1 for these parameters, every run is skipped");
    }

    unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.n_runs)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t i = next++; i < config.n_runs; i = next++) {
                const PricePath path = simulate_gbm(config.params, run_seed(config.master_seed, i));
                const RunResult r = run_schedule(path, planner, config.strategy.mode, true);
                out.runs[i] = {r.pnl, r.n_repetitions, r.trade_count, r.ended_by};
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = config.n_runs;
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> pnl, trades, n;
    for (const auto& r : out.runs) {
        if (r.ended_by == EndReason::Skipped) {
            ++out.skipped;
            continue;
        }
        pnl.push_back(r.pnl);
        trades.push_back(static_cast<double>(r.trades));
        n.push_back(r.n);
    }
    if (pnl.empty()) throw AllRunsSkipped("every run was skipped");
    out.summary = metrics(pnl, trades, n);
    return out;
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "c") return SweepAxis::C;
    if (name == "mu") return SweepAxis::Mu;
    if (name == "sigma") return SweepAxis::Sigma;
    if (name == "eta-mu") return SweepAxis::EtaFixedMu;
    if (name == "eta-sigma") return SweepAxis::EtaFixedSigma;
    if (name == "alpha") return SweepAxis::Alpha;
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::C: return "c";
        case SweepAxis::Mu: return "mu";
        case SweepAxis::Sigma: return "sigma";
        case SweepAxis::EtaFixedMu: return "eta-mu";
        case SweepAxis::EtaFixedSigma: return "eta-sigma";
        case SweepAxis::Alpha: return "alpha";
    }
    return "unknown";
}

ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value) {
    ExperimentConfig cfg = base;
    switch (axis) {
        case SweepAxis::C: cfg.strategy.c_rule = CRule::drift_ratio(value); break;
        case SweepAxis::Mu: cfg.params.mu = value; break;
        case SweepAxis::Sigma: cfg.params.sigma = value; break;
        case SweepAxis::EtaFixedMu:
            if (value == 0.0) throw std::invalid_argument("eta must be nonzero");
            cfg.params.sigma = cfg.params.mu / value;
            break;
        case SweepAxis::EtaFixedSigma: cfg.params.mu = value * cfg.params.sigma; break;
        case SweepAxis::Alpha: cfg.strategy.alpha = value; break;
    }
    cfg.validate();
    return cfg;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepAxis axis,
                            std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    std::vector<ExperimentConfig> configs;
    for (double v : values) configs.push_back(apply_axis(base, axis, v));
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        configs[i].master_seed = base.master_seed + static_cast<std::uint64_t>(i) * kGolden;
        rows.push_back({values[i], run_experiment(configs[i]).summary});
    }
    return rows;
}

Metadata experiment_metadata(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    const auto& s = cfg.strategy;
    std::string c_rule = s.c_rule.kind == CRule::Kind::Fixed
                             ? "fixed:" + format_double(s.c_rule.value)
                             : "drift-ratio:" + format_double(s.c_rule.value);
    return {{"version", kVersion},
            {"seed", std::to_string(cfg.master_seed)},
            {"quantile_method", kQuantileMethod},
            {"execution_mode", to_string(s.mode)},
            {"strategy", to_string(s.kind)},
            {"alpha", format_double(s.alpha)},
            {"c_rule", c_rule},
            {"mu", format_double(p.mu)},
            {"sigma", format_double(p.sigma)},
            {"s0", format_double(p.s0)},
            {"horizon", format_double(p.horizon)},
            {"steps", std::to_string(p.n_steps)},
            {"runs", std::to_string(cfg.n_runs)}};
}

void write_metadata(const Metadata& meta, std::ostream& out) {
    out << '#';
    for (const auto& [k, v] : meta) out << ' ' << k << '=' << v;
    out << '\n';
}

namespace {

std::vector<std::string> summary_cells(const std::string& param, const MetricsSummary& m,
                                       double horizon) {
    return {param,
            format_double(m.mean_gain / horizon),
            format_double(m.median_gain),
            format_double(m.var95),
            format_double(m.gain_per_trade),
            format_double(m.loss_fraction),
            format_double(m.loss_mean),
            format_double(m.avg_n),
            format_double(m.max_n)};
}

const std::vector<std::string> kSummaryHeader = {"param",  "gain_pa", "median",
                                                 "var95",  "gain_pt", "losses",
                                                 "loss_mean", "avg_n", "max_n"};

}  // namespace

void write_summary_csv(const std::vector<std::pair<std::string, MetricsSummary>>& rows,
                       double horizon, const Metadata& meta, std::ostream& out) {
    write_metadata(meta, out);
    for (std::size_t i = 0; i < kSummaryHeader.size(); ++i)
        out << (i ? "," : "") << kSummaryHeader[i];
    out << '\n';
    for (const auto& [param, m] : rows) {
        const auto cells = summary_cells(param, m, horizon);
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
}

void write_summary_markdown(const std::vector<std::pair<std::string, MetricsSummary>>& rows,
                            double horizon, std::ostream& out) {
    std::vector<std::vector<std::string>> table{kSummaryHeader};
    for (const auto& [param, m] : rows) {
        std::vector<std::string> cells{param};
        for (double v : {m.mean_gain / horizon, m.median_gain, m.var95, m.gain_per_trade,
                         m.loss_fraction, m.loss_mean, m.avg_n, m.max_n}) {
            std::ostringstream s;
            s << std::setprecision(6) << v;
            cells.push_back(s.str());
        }
        table.push_back(std::move(cells));
    }
    std::vector<std::size_t> width(kSummaryHeader.size(), 3);
    for (const auto& row : table)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    auto emit = [&](const std::vector<std::string>& row) {
        out << '|';
        for (std::size_t i = 0; i < row.size(); ++i)
            out << ' ' << std::setw(static_cast<int>(width[i])) << row[i] << " |";
        out << '\n';
    };
    emit(table[0]);
    out << '|';
    for (std::size_t w : width) out << ' ' << std::string(w - 1, '-') << ": |";
    out << '\n';
    for (std::size_t r = 1; r < table.size(); ++r) emit(table[r]);
}

void write_runs_csv(const std::vector<RunRecord>& runs, const Metadata& meta, std::ostream& out) {
    write_metadata(meta, out);
    out << "run,pnl,n,trades,ended_by\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        out << i << ',' << format_double(r.pnl) << ',' << r.n << ',' << r.trades << ','
            << to_string(r.ended_by) << '\n';
    }
}

std::vector<HistogramBin> histogram(std::span<const double> sample, std::size_t bins) {
    if (sample.empty()) throw EmptySample("histogram needs at least one value");
    if (bins == 0) throw std::invalid_argument("bin count must be positive");
    const auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
    const double lo = *mn, hi = *mx;
    const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lo = lo + width * static_cast<double>(b);
        out[b].hi = b + 1 == bins ? std::max(hi, lo + width) : lo + width * static_cast<double>(b + 1);
    }
    for (double v : sample) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        out[std::min(b, bins - 1)].count++;
    }
    return out;
}

void write_histogram_csv(const std::vector<HistogramBin>& bins, const Metadata& meta,
                         std::ostream& out) {
    write_metadata(meta, out);
    out << "bin_lo,bin_hi,count\n";
    for (const auto& b : bins)
        out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << '\n';
}

}  // namespace gstatarb
