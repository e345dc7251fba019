#include "gstatarb/strategies.hpp"

#include <cmath>
#include <stdexcept>

#include "gstatarb/errors.hpp"

namespace gstatarb {

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::EmbeddedBinomial: return "embedded";
        case StrategyKind::FollowTrend: return "trend";
        case StrategyKind::GFin: return "gfin";
    }
    return "unknown";
}

std::string to_string(ExecutionMode mode) {
    return mode == ExecutionMode::Snap ? "snap" : "observed";
}

std::string to_string(EndReason reason) {
    switch (reason) {
        case EndReason::PositivePnl: return "PositivePnl";
        case EndReason::Horizon: return "Horizon";
        case EndReason::Skipped: return "Skipped";
    }
    return "unknown";
}

std::string to_string(Orientation orientation) {
    return orientation == Orientation::PositiveDrift ? "positive" : "negative";
}

double CRule::resolve(double mu, double sigma) const {
    const double c = kind == Kind::Fixed ? value : value * std::abs(mu) / sigma;
    if (!(c > 0.0 && c < 0.5)) throw InvalidInterval("barrier step c must lie in (0, 1/2)");
    return c;
}

RunResult run_schedule(const PricePath& path, const PlanFn& plan_fn, ExecutionMode mode,
                       bool stop_on_positive) {
    RunResult result;
    TradeLedger& ledger = result.ledger;
    const auto& s = path.prices;
    const std::size_t last = path.last_index();
    const bool snap = mode == ExecutionMode::Snap;
    auto exec_price = [&](const Hit& h) { return snap ? h.level : s[h.index]; };

    std::size_t idx = 0;
    double anchor = s[0];
    bool finished = false;

    while (!finished && idx < last) {
        CycleRecord rec;
        rec.start_index = idx;
        rec.anchor = anchor;
        rec.plan = plan_fn(idx, anchor);
        const StrategyVector& psi = rec.plan.strategy;
        const double c = rec.plan.c;
        const double cash_before = ledger.cash();
        const double qty_before = ledger.traded_quantity();
        ++result.n_repetitions;

        ledger.execute(idx, anchor, psi.phi1);
        std::optional<Hit> end;
        double end_price = 0.0;

        if (auto h1 = next_exit(path, idx, anchor * (1.0 - c), anchor * (1.0 + c))) {
            const bool up = h1->level > anchor;
            const double target = up ? psi.phi2_up : psi.phi2_down;
            ledger.execute(h1->index, exec_price(*h1), target - ledger.open_position());
            const double lo = up ? anchor : anchor * (1.0 - 2.0 * c);
            const double hi = up ? anchor * (1.0 + 2.0 * c) : anchor;
            if (auto h2 = next_exit(path, h1->index, lo, hi)) {
                const bool trend_up = up && h2->level == hi;
                const bool trend_down = !up && h2->level == lo;
                const bool positive = rec.plan.orientation == Orientation::PositiveDrift;
                const bool third = psi.phi3 && *psi.phi3 != 0.0 &&
                                   (positive ? trend_up : trend_down);
                if (third) {
                    ledger.execute(h2->index, exec_price(*h2), *psi.phi3 - ledger.open_position());
                    const double lo3 = positive ? anchor : anchor * (1.0 - 4.0 * c);
                    const double hi3 = positive ? anchor * (1.0 + 4.0 * c) : anchor;
                    if (auto h3 = next_exit(path, h2->index, lo3, hi3)) {
                        end = h3;
                        end_price = exec_price(*h3);
                    }
                } else {
                    end = h2;
                    end_price = exec_price(*h2);
                }
            }
        }

        if (end) {
            ledger.close_out(end->index, end_price);
            rec.end_index = end->index;
            rec.completed = true;
            ++result.n_completed;
            idx = end->index;
            anchor = end_price;
            if (stop_on_positive && ledger.cash() > 0.0) {
                result.ended_by = EndReason::PositivePnl;
                finished = true;
            }
        } else {
            ledger.close_out(last, s[last]);
            rec.end_index = last;
            finished = true;
        }
        rec.pnl = ledger.cash() - cash_before;
        rec.traded_qty = ledger.traded_quantity() - qty_before;
        result.cycles.push_back(std::move(rec));
    }

    if (ledger.open_position() != 0.0) ledger.close_out(last, s[last]);
    result.pnl = ledger.cash();
    result.trade_count = ledger.events().size();
    if (result.ended_by != EndReason::PositivePnl) result.ended_by = EndReason::Horizon;
    return result;
}

PlanFn make_gbm_planner(const GbmParams& params, const StrategyConfig& config) {
    params.validate();
    if (!(config.alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    const double c = config.c_rule.resolve(params.mu, params.sigma);
    const double q = embedded_q(c, params.mu, params.sigma);
    if (std::abs(q - 1.0) <= kTolerance) throw NoSaExists("q equals 1 on the multiplicative grid");
    const Orientation orientation =
        params.mu >= 0.0 ? Orientation::PositiveDrift : Orientation::NegativeDrift;
    const StrategyKind kind = config.kind;
    const double alpha = config.alpha;
    const double mu = params.mu;
    const double sigma = params.sigma;

    const bool three_period = kind != StrategyKind::EmbeddedBinomial &&
                              (orientation == Orientation::PositiveDrift || c < 0.25);
    std::array<double, 5> weights{};
    if (three_period) weights = trend_weights(orientation, c, mu, sigma);

    return [=](std::size_t, double anchor) {
        CyclePlan plan;
        plan.orientation = orientation;
        plan.c = c;
        plan.mu = mu;
        plan.sigma = sigma;
        plan.strategy = embedded_phi(c, anchor, q);
        if (three_period) {
            plan.lattice = grid_trend_lattice(orientation, anchor, c, weights);
            plan.strategy = kind == StrategyKind::FollowTrend
                                ? extend_with_trend(*plan.lattice, plan.strategy, alpha)
                                : extend_gfin(*plan.lattice, plan.strategy, alpha);
        }
        return plan;
    };
}

namespace {

RunResult run_kind(const PricePath& path, const GbmParams& params, StrategyConfig config,
                   StrategyKind kind) {
    config.kind = kind;
    return run_schedule(path, make_gbm_planner(params, config), config.mode, true);
}

}  // namespace

RunResult run_embedded_binomial(const PricePath& path, const GbmParams& params,
                                const StrategyConfig& config) {
    return run_kind(path, params, config, StrategyKind::EmbeddedBinomial);
}

RunResult run_follow_trend(const PricePath& path, const GbmParams& params,
                           const StrategyConfig& config) {
    return run_kind(path, params, config, StrategyKind::FollowTrend);
}

RunResult run_gfin(const PricePath& path, const GbmParams& params, const StrategyConfig& config) {
    return run_kind(path, params, config, StrategyKind::GFin);
}

RunResult run_strategy(const PricePath& path, const GbmParams& params,
                       const StrategyConfig& config) {
    try {
        return run_kind(path, params, config, config.kind);
    } catch (const NoSaExists&) {
        RunResult skipped;
        skipped.ended_by = EndReason::Skipped;
        return skipped;
    }
}

}  // namespace gstatarb
