#pragma once

// Finite lattice market models, statistical G-arbitrage predicates and the
// closed-form strategy solvers built on them.
//
// Paths are addressed by zero-based index: path 0 is the scenario usually
// written omega_1. Each model documents its own path order.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gstatarb/linalg.hpp"

namespace gstatarb {

/// Tolerance for equality and degeneracy tests on strategy constraints.
inline constexpr double kTolerance = 1e-10;

/// Which strategy component is held over one period of a path.
enum class Slot { First, SecondUp, SecondDown, Third };

struct LatticePath {
    std::vector<double> increments;
    std::vector<Slot> slots;
    /// Paths ending in the same node share this id.
    int terminal_node = 0;
    double weight = 0.0;
};

struct StrategyVector {
    double phi1 = 0.0;
    double phi2_up = 0.0;
    double phi2_down = 0.0;
    /// Position held in the third period after two same-direction moves.
    std::optional<double> phi3;

    double component(Slot slot) const;
    StrategyVector scaled(double factor) const;

    friend bool operator==(const StrategyVector&, const StrategyVector&) = default;
};

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

struct BinomialPrices {
    double s0 = 0.0;
    double up = 0.0;
    double down = 0.0;
    double uu = 0.0;
    double ud = 0.0;
    double dd = 0.0;
};

/// Recombining two-period binomial model.
/// Path order: uu, ud, du, dd.
class TwoPeriodBinomial {
public:
    TwoPeriodBinomial(BinomialPrices prices, std::array<double, 4> weights);

    const BinomialPrices& prices() const noexcept { return prices_; }
    const std::array<double, 4>& weights() const noexcept { return weights_; }

    /// P(ud) / P(du).
    double q() const noexcept { return weights_[1] / weights_[2]; }

    /// First-period increment on path `w` (1-based scenario number).
    double dS1(int w) const { return first_.at(w - 1); }
    double dS2(int w) const { return second_.at(w - 1); }

    std::vector<LatticePath> paths() const;
    TwoPeriodBinomial scaled(double lambda) const;
    TwoPeriodBinomial with_weights(std::array<double, 4> weights) const;

private:
    BinomialPrices prices_;
    std::array<double, 4> weights_;
    std::array<double, 4> first_{};
    std::array<double, 4> second_{};
};

struct TrinomialPrices {
    double s0 = 0.0;
    double up = 0.0;
    double down = 0.0;
    /// Second-period state reachable from both first-period nodes.
    double top = 0.0;
    double uu = 0.0;
    double ud = 0.0;
    double dd = 0.0;
};

/// Binomial first step, trinomial second step with a shared top state.
/// Path order: up-top, up-uu, up-ud, down-top, down-ud, down-dd.
class TrinomialTopModel {
public:
    TrinomialTopModel(TrinomialPrices prices, std::array<double, 6> weights);

    const TrinomialPrices& prices() const noexcept { return prices_; }
    const std::array<double, 6>& weights() const noexcept { return weights_; }

    double dS1(int w) const { return first_.at(w - 1); }
    double dS2(int w) const { return second_.at(w - 1); }

    std::vector<LatticePath> paths() const;
    TrinomialTopModel scaled(double lambda) const;
    TrinomialTopModel with_weights(std::array<double, 6> weights) const;

private:
    TrinomialPrices prices_;
    std::array<double, 6> weights_;
    std::array<double, 6> first_{};
    std::array<double, 6> second_{};
};

enum class Orientation { PositiveDrift, NegativeDrift };

struct TrendPrices {
    double s0 = 0.0;
    double up = 0.0;
    double down = 0.0;
    double uu = 0.0;
    double ud = 0.0;
    double dd = 0.0;
    /// Third-period prices reached from the trend node (uu for positive
    /// drift, dd for negative drift).
    double trend_up = 0.0;
    double trend_down = 0.0;
};

/// Two-period binomial model extended by a third period after two
/// same-direction moves.
///
/// Positive drift path order: uu+, ud, du, dd, uu-.
/// Negative drift path order: uu, ud, du, dd-, dd+.
class TrendLattice {
public:
    TrendLattice(Orientation orientation, TrendPrices prices, std::array<double, 5> weights);

    Orientation orientation() const noexcept { return orientation_; }
    const TrendPrices& prices() const noexcept { return prices_; }
    const std::array<double, 5>& weights() const noexcept { return weights_; }

    /// P(ud) / P(du).
    double q() const noexcept { return weights_[1] / weights_[2]; }

    double dS1(int w) const { return first_.at(w - 1); }
    double dS2(int w) const { return second_.at(w - 1); }
    double dS3(int w) const { return third_.at(w - 1); }

    /// Scenario numbers (1-based) of the paths that continue into the third
    /// period, moving with and against the trend.
    int trend_path() const noexcept { return orientation_ == Orientation::PositiveDrift ? 1 : 4; }
    int reversal_path() const noexcept { return 5; }

    std::vector<LatticePath> paths() const;
    TrendLattice scaled(double lambda) const;

    /// The two-period sub-model obtained by stopping after the second period.
    TwoPeriodBinomial embedded_binomial() const;

private:
    Orientation orientation_;
    TrendPrices prices_;
    std::array<double, 5> weights_;
    std::array<double, 5> first_{};
    std::array<double, 5> second_{};
    std::array<double, 5> third_{};
};

using LatticeModel = std::variant<TwoPeriodBinomial, TrinomialTopModel, TrendLattice>;

std::vector<LatticePath> paths(const LatticeModel& model);

// ---------------------------------------------------------------------------
// Partitions and the statistical arbitrage predicate
// ---------------------------------------------------------------------------

/// A finite information system: disjoint cells of path indices covering all paths.
struct ScenarioPartition {
    std::vector<std::vector<std::size_t>> cells;

    /// Throws InvalidPartition unless the cells are nonempty, disjoint and cover [0, n_paths).
    void validate(std::size_t n_paths) const;
};

/// One cell per distinct terminal node.
ScenarioPartition terminal_partition(const LatticeModel& model);

/// Cells {final price above start, final price below start} of a trend lattice.
ScenarioPartition final_value_partition(const TrendLattice& model);

double payoff(const LatticeModel& model, const StrategyVector& strategy, std::size_t path);

double expected_payoff(const LatticeModel& model, const StrategyVector& strategy);

/// E[gain | cell] for every cell.
std::vector<double> conditional_gains(const LatticeModel& model, const StrategyVector& strategy,
                                      const ScenarioPartition& partition);

/// sum over the cell of P(w) * gain(w), without normalising by P(cell).
std::vector<double> weighted_cell_gains(const LatticeModel& model, const StrategyVector& strategy,
                                        const ScenarioPartition& partition);

/// Every cell gain >= -kTolerance and the unconditional mean > kTolerance.
bool is_statistical_arbitrage(const LatticeModel& model, const StrategyVector& strategy,
                              const ScenarioPartition& partition);

// ---------------------------------------------------------------------------
// Two-period binomial model
// ---------------------------------------------------------------------------

enum class NsaStatus { NsaCertified, SaExists, NotCertified };

std::string to_string(NsaStatus status);

struct NsaCertificate {
    NsaStatus status = NsaStatus::NotCertified;
    std::map<std::string, double> diagnostics;
};

/// Constraint matrix whose rows are the payoffs on uu and dd and the
/// P(du)-normalised expected payoff on the middle node.
Matrix3 binomial_A_matrix(const TwoPeriodBinomial& model);

/// The weight ratio P(ud)/P(du) at which no statistical arbitrage exists.
double tilde_q(const TwoPeriodBinomial& model);

NsaCertificate nsa_binomial(const TwoPeriodBinomial& model);

/// The unique equivalent martingale measure.
std::array<double, 4> emm_binomial(const TwoPeriodBinomial& model);

/// Closed-form strategy with payoff 1 on uu, dd and the middle node on average.
StrategyVector solve_binomial_sa(const TwoPeriodBinomial& model);

// ---------------------------------------------------------------------------
// Trinomial model with a shared top state
// ---------------------------------------------------------------------------

NsaCertificate trinomial_nsa(const TrinomialTopModel& model);

struct PidReport {
    std::array<double, 6> candidate{};
    bool is_valid_emm = false;
};

/// Looks for a martingale measure whose density is a function of the terminal
/// price alone.
PidReport counterexample_pid_check(const TrinomialTopModel& model);

// ---------------------------------------------------------------------------
// Trend lattices
// ---------------------------------------------------------------------------

/// The 4x4 system of the follow-the-trend strategy. Rows: trend path payoff,
/// opposite two-step path payoff, P(du)-normalised middle node, reversal path payoff.
Matrix4 trend_system_matrix(const TrendLattice& model);

/// Column of the inverse two-period matrix that absorbs the third-period position.
Vec<3> trend_gamma(const TrendLattice& model);

/// Extends a two-period base strategy with the third-period position
/// (1 - alpha) / (dS3(trend) - dS3(reversal)).
StrategyVector extend_with_trend(const TrendLattice& model, const StrategyVector& base,
                                 double alpha);

/// G~-arbitrage on the terminal-node partition: solves trend_system_matrix * psi = (1, 1, 1, alpha).
StrategyVector trend_strategy(const TrendLattice& model, double alpha);

/// The 4x4 system whose rows are the sufficient conditions for an arbitrage on
/// final_value_partition. Targets are (1, 1, 1, alpha).
Matrix4 gfin_system_matrix(const TrendLattice& model);

StrategyVector gfin_base(const TrendLattice& model);
Vec<3> gfin_gamma(const TrendLattice& model);
StrategyVector extend_gfin(const TrendLattice& model, const StrategyVector& base, double alpha);

/// Arbitrage on final_value_partition built from the closed forms of the
/// orientation's own matrix.
StrategyVector gfin_strategy(const TrendLattice& model, double alpha);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Range of third-period positions that keep both third-period payoffs of a
/// base strategy nonnegative.
Interval gfin_psi_bounds(const TrendLattice& model, const StrategyVector& base_strategy);

}  // namespace gstatarb
