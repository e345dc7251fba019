#pragma once

// Closed-form quantities of geometric Brownian motion used to embed lattice
// models into continuous paths.

#include <array>
#include <span>

#include "gstatarb/lattice.hpp"

namespace gstatarb {

struct GbmParams {
    double mu = 0.0;
    double sigma = 0.0;
    double s0 = 0.0;
    double horizon = 1.0;
    int n_steps = 1000;

    double eta() const noexcept { return mu / sigma; }
    double dt() const noexcept { return horizon / n_steps; }
    /// Throws std::invalid_argument when an invariant fails.
    void validate() const;
};

/// Multiplicative barrier levels anchor * (1 + k c).
struct BarrierGrid {
    double anchor = 0.0;
    double c = 0.0;

    BarrierGrid(double anchor, double c);
    double level(int k) const noexcept { return anchor * (1.0 + k * c); }
};

/// Below this |mu / sigma^2 - 1/2| the exit probabilities use their driftless limit.
inline constexpr double kNuEpsilon = 1e-9;

/// P(S hits a before b | S_0 = s0). Requires 0 < a <= s0 <= b, a < b.
double exit_prob_lower(double s0, double a, double b, double mu, double sigma);

/// P(S hits b before a | S_0 = s0).
double exit_prob_upper(double s0, double a, double b, double mu, double sigma);

/// P(ud) / P(du) of the binomial model embedded through the levels s0(1 +- c),
/// s0(1 +- 2c).
double embedded_q(double c, double mu, double sigma);

/// Path weights (uu, ud, du, dd) of the embedded binomial model.
std::array<double, 4> embedded_weights(double c, double mu, double sigma);

/// Path weights of the embedded trend lattice. The third period runs between
/// s0 and s0(1 + 4c) (positive) or s0(1 - 4c) and s0 (negative, needs c < 1/4).
std::array<double, 5> trend_weights(Orientation orientation, double c, double mu, double sigma);

/// Binomial model on the multiplicative grid of `anchor` and `c`.
TwoPeriodBinomial grid_binomial(double anchor, double c, std::array<double, 4> weights);

/// Trend lattice on the multiplicative grid of `anchor` and `c`.
TrendLattice grid_trend_lattice(Orientation orientation, double anchor, double c,
                                std::array<double, 5> weights);

struct EmbeddedDenominators {
    double corrected = 0.0;  ///< 2 (q - 1) (c s0)^3, consistent with the lattice solver
    double printed = 0.0;    ///< 2 (q - 2) (c s0)^3
};

EmbeddedDenominators embedded_denominators(double c, double s0_anchor, double q);

/// Grid specialisation of solve_binomial_sa. Throws NoSaExists when |q - 1| <= kTolerance.
StrategyVector embedded_phi(double c, double s0_anchor, double q);

struct MleEstimate {
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
};

/// Maximum likelihood drift and volatility from closing prices sampled every
/// `dt` years. Variance uses the n - 1 denominator.
MleEstimate mle_estimate(std::span<const double> closes, double dt);

}  // namespace gstatarb
