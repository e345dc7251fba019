#pragma once

// Batched simulation runs, summary metrics and parameter sweeps.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gstatarb/strategies.hpp"

namespace gstatarb {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kQuantileMethod = "order-statistic";

struct ExperimentConfig {
    GbmParams params;
    StrategyConfig strategy;
    std::size_t n_runs = 1;
    std::uint64_t master_seed = 0;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;

    void validate() const;
};

struct MetricsSummary {
    double mean_gain = 0.0;
    double median_gain = 0.0;
    double var95 = 0.0;
    double gain_per_trade = 0.0;
    double loss_fraction = 0.0;
    double loss_mean = 0.0;
    double avg_n = 0.0;
    double max_n = 0.0;
    std::size_t n_runs = 0;

    friend bool operator==(const MetricsSummary&, const MetricsSummary&) = default;
};

struct RunRecord {
    double pnl = 0.0;
    int n = 0;
    std::size_t trades = 0;
    EndReason ended_by = EndReason::Horizon;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ExperimentResult {
    MetricsSummary summary;
    /// Indexed by run, skipped runs included.
    std::vector<RunRecord> runs;
    std::size_t skipped = 0;
};

/// Seed of run `run_index`: splitmix64 finaliser applied to
/// master + (run_index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index);

/// Lower median; var95 is minus the order statistic at ceil(0.05 n).
MetricsSummary metrics(std::span<const double> pnl, std::span<const double> trades,
                       std::span<const double> n);

/// Throws AllRunsSkipped when q = 1 voids every run. Output does not depend on
/// the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum class SweepAxis { C, Mu, Sigma, EtaFixedMu, EtaFixedSigma, Alpha };

SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

/// Config for one sweep value. `c` sets the multiplier k of c = k |mu| / sigma,
/// `eta-mu` keeps mu and sets sigma = mu / eta, `eta-sigma` keeps sigma and
/// sets mu = eta sigma.
ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value);

struct SweepRow {
    double value = 0.0;
    MetricsSummary summary;
};

/// Row i uses master seed base.master_seed + i * 0x9E3779B97F4A7C15.
std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepAxis axis,
                            std::span<const double> values);

using Metadata = std::vector<std::pair<std::string, std::string>>;

Metadata experiment_metadata(const ExperimentConfig& config);

void write_metadata(const Metadata& meta, std::ostream& out);

/// Header `param,gain_pa,median,var95,gain_pt,losses,loss_mean,avg_n,max_n`.
void write_summary_csv(const std::vector<std::pair<std::string, MetricsSummary>>& rows,
                       double horizon, const Metadata& meta, std::ostream& out);

void write_summary_markdown(const std::vector<std::pair<std::string, MetricsSummary>>& rows,
                            double horizon, std::ostream& out);

/// Header `run,pnl,n,trades,ended_by`.
void write_runs_csv(const std::vector<RunRecord>& runs, const Metadata& meta, std::ostream& out);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// Equal-width bins over [min, max] of the sample.
std::vector<HistogramBin> histogram(std::span<const double> sample, std::size_t bins);

void write_histogram_csv(const std::vector<HistogramBin>& bins, const Metadata& meta,
                         std::ostream& out);

}  // namespace gstatarb
