#pragma once

// Repeated lattice strategies executed along price paths at barrier hitting times.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gstatarb/gbm.hpp"
#include "gstatarb/path.hpp"

namespace gstatarb {

enum class StrategyKind { EmbeddedBinomial, FollowTrend, GFin };
enum class ExecutionMode { Snap, Observed };
enum class EndReason { PositivePnl, Horizon, Skipped };

std::string to_string(StrategyKind kind);
std::string to_string(ExecutionMode mode);
std::string to_string(EndReason reason);
std::string to_string(Orientation orientation);

/// Either a fixed relative step or c = k |mu| / sigma.
struct CRule {
    enum class Kind { Fixed, DriftRatio };
    Kind kind = Kind::DriftRatio;
    double value = 0.01;

    static CRule fixed(double c) { return {Kind::Fixed, c}; }
    static CRule drift_ratio(double k) { return {Kind::DriftRatio, k}; }

    /// Throws InvalidInterval unless the result lies in (0, 1/2).
    double resolve(double mu, double sigma) const;
};

struct StrategyConfig {
    StrategyKind kind = StrategyKind::EmbeddedBinomial;
    CRule c_rule;
    double alpha = 0.0;
    ExecutionMode mode = ExecutionMode::Observed;
};

/// Positions and lattice for one embedded model started at `anchor`.
struct CyclePlan {
    StrategyVector strategy;
    Orientation orientation = Orientation::PositiveDrift;
    double c = 0.0;
    /// Present for the three-period strategies.
    std::optional<TrendLattice> lattice;
    double mu = 0.0;
    double sigma = 0.0;
};

struct CycleRecord {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    double anchor = 0.0;
    CyclePlan plan;
    double pnl = 0.0;
    double traded_qty = 0.0;
    /// False when the horizon interrupted the cycle.
    bool completed = false;
};

struct RunResult {
    double pnl = 0.0;
    /// Embedded models started, including one cut short by the horizon.
    int n_repetitions = 0;
    int n_completed = 0;
    std::size_t trade_count = 0;
    EndReason ended_by = EndReason::Horizon;
    TradeLedger ledger;
    std::vector<CycleRecord> cycles;
};

/// Builds the plan for a cycle starting at a path index and anchor price.
using PlanFn = std::function<CyclePlan(std::size_t start_index, double anchor)>;

/// Runs consecutive cycles from index 0. With `stop_on_positive` the run ends at
/// the first cycle end with positive cumulative P&L. Open positions are
/// liquidated at the final grid price.
RunResult run_schedule(const PricePath& path, const PlanFn& plan, ExecutionMode mode,
                       bool stop_on_positive);

/// Plans for constant GBM parameters. Throws NoSaExists when q = 1.
PlanFn make_gbm_planner(const GbmParams& params, const StrategyConfig& config);

RunResult run_embedded_binomial(const PricePath& path, const GbmParams& params,
                                const StrategyConfig& config);
RunResult run_follow_trend(const PricePath& path, const GbmParams& params,
                           const StrategyConfig& config);
RunResult run_gfin(const PricePath& path, const GbmParams& params, const StrategyConfig& config);

/// Dispatches on config.kind. A NoSaExists precondition failure yields a
/// Skipped result with zero P&L.
RunResult run_strategy(const PricePath& path, const GbmParams& params,
                       const StrategyConfig& config);

}  // namespace gstatarb
