#include "gstatarb/gbm.hpp"

#include <cmath>
#include <stdexcept>

#include "gstatarb/errors.hpp"

namespace gstatarb {

void GbmParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
    if (!(s0 > 0.0) || !std::isfinite(s0)) throw std::invalid_argument("s0 must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be at least 1");
    if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
}

BarrierGrid::BarrierGrid(double anchor_, double c_) : anchor(anchor_), c(c_) {
    if (!(anchor > 0.0)) throw InvalidInterval("grid anchor must be positive");
    if (!(c > 0.0 && c < 0.5)) throw InvalidInterval("grid step must lie in (0, 1/2)");
}

namespace {

struct LogInterval {
    double x, a, b, k;
    bool driftless;
};

LogInterval prepare(double s0, double a, double b, double mu, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInterval("sigma must be positive");
    if (!(a > 0.0 && a < b && a <= s0 && s0 <= b))
        throw InvalidInterval("exit probabilities need 0 < a <= s0 <= b and a < b");
    const double nu = mu / (sigma * sigma) - 0.5;
    return {std::log(s0), std::log(a), std::log(b), 2.0 * nu, std::abs(nu) <= kNuEpsilon};
}

}  // namespace

double exit_prob_lower(double s0, double a, double b, double mu, double sigma) {
    const auto li = prepare(s0, a, b, mu, sigma);
    if (s0 == a) return 1.0;
    if (s0 == b) return 0.0;
    const double k = li.k;
    if (li.driftless) return (li.b - li.x) / (li.b - li.a);
    if (k > 0.0)
        return std::exp(-k * (li.x - li.a)) * std::expm1(-k * (li.b - li.x)) /
               std::expm1(-k * (li.b - li.a));
    return std::expm1(-k * (li.x - li.b)) / std::expm1(-k * (li.a - li.b));
}

double exit_prob_upper(double s0, double a, double b, double mu, double sigma) {
    const auto li = prepare(s0, a, b, mu, sigma);
    if (s0 == a) return 0.0;
    if (s0 == b) return 1.0;
    const double k = li.k;
    if (li.driftless) return (li.x - li.a) / (li.b - li.a);
    if (k > 0.0) return std::expm1(-k * (li.x - li.a)) / std::expm1(-k * (li.b - li.a));
    return std::exp(k * (li.b - li.x)) * std::expm1(k * (li.x - li.a)) /
           std::expm1(k * (li.b - li.a));
}

namespace {

void check_step(double c) {
    if (!(c > 0.0 && c < 0.5)) throw InvalidInterval("grid step must lie in (0, 1/2)");
}

}  // namespace

double embedded_q(double c, double mu, double sigma) {
    check_step(c);
    const double up = exit_prob_upper(1.0, 1.0 - c, 1.0 + c, mu, sigma);
    const double down = exit_prob_lower(1.0, 1.0 - c, 1.0 + c, mu, sigma);
    const double up_then_back = exit_prob_lower(1.0 + c, 1.0, 1.0 + 2.0 * c, mu, sigma);
    const double down_then_back = exit_prob_upper(1.0 - c, 1.0 - 2.0 * c, 1.0, mu, sigma);
    return up * up_then_back / (down * down_then_back);
}

std::array<double, 4> embedded_weights(double c, double mu, double sigma) {
    check_step(c);
    const double up = exit_prob_upper(1.0, 1.0 - c, 1.0 + c, mu, sigma);
    const double down = exit_prob_lower(1.0, 1.0 - c, 1.0 + c, mu, sigma);
    const double uu = exit_prob_upper(1.0 + c, 1.0, 1.0 + 2.0 * c, mu, sigma);
    const double ud = exit_prob_lower(1.0 + c, 1.0, 1.0 + 2.0 * c, mu, sigma);
    const double du = exit_prob_upper(1.0 - c, 1.0 - 2.0 * c, 1.0, mu, sigma);
    const double dd = exit_prob_lower(1.0 - c, 1.0 - 2.0 * c, 1.0, mu, sigma);
    return {up * uu, up * ud, down * du, down * dd};
}

std::array<double, 5> trend_weights(Orientation orientation, double c, double mu, double sigma) {
    const auto w = embedded_weights(c, mu, sigma);
    if (orientation == Orientation::PositiveDrift) {
        const double s = 1.0 + 2.0 * c;
        const double cont = exit_prob_upper(s, 1.0, 1.0 + 4.0 * c, mu, sigma);
        const double rev = exit_prob_lower(s, 1.0, 1.0 + 4.0 * c, mu, sigma);
        return {w[0] * cont, w[1], w[2], w[3], w[0] * rev};
    }
    if (!(c < 0.25)) throw InvalidInterval("negative-drift trend lattice needs c < 1/4");
    const double s = 1.0 - 2.0 * c;
    const double cont = exit_prob_lower(s, 1.0 - 4.0 * c, 1.0, mu, sigma);
    const double rev = exit_prob_upper(s, 1.0 - 4.0 * c, 1.0, mu, sigma);
    return {w[0], w[1], w[2], w[3] * cont, w[3] * rev};
}

TwoPeriodBinomial grid_binomial(double anchor, double c, std::array<double, 4> weights) {
    const BarrierGrid g(anchor, c);
    return {{anchor, g.level(1), g.level(-1), g.level(2), anchor, g.level(-2)}, weights};
}

TrendLattice grid_trend_lattice(Orientation orientation, double anchor, double c,
                                std::array<double, 5> weights) {
    const BarrierGrid g(anchor, c);
    TrendPrices p{anchor, g.level(1), g.level(-1), g.level(2), anchor, g.level(-2), 0.0, 0.0};
    if (orientation == Orientation::PositiveDrift) {
        p.trend_up = g.level(4);
        p.trend_down = anchor;
    } else {
        if (!(c < 0.25)) throw InvalidInterval("negative-drift trend lattice needs c < 1/4");
        p.trend_up = anchor;
        p.trend_down = g.level(-4);
    }
    return {orientation, p, weights};
}

EmbeddedDenominators embedded_denominators(double c, double s0_anchor, double q) {
    const double step = c * s0_anchor;
    const double cube = step * step * step;
    return {2.0 * (q - 1.0) * cube, 2.0 * (q - 2.0) * cube};
}

StrategyVector embedded_phi(double c, double s0_anchor, double q) {
    check_step(c);
    if (!(s0_anchor > 0.0)) throw InvalidInterval("anchor must be positive");
    if (std::abs(q - 1.0) <= kTolerance) throw NoSaExists("q equals 1 on the multiplicative grid");
    const double step = c * s0_anchor;
    const double d = embedded_denominators(c, s0_anchor, q).corrected;
    const double sq = step * step;
    return {(2.0 + q) * sq / d, (q - 4.0) * sq / d, -3.0 * q * sq / d, std::nullopt};
}

MleEstimate mle_estimate(std::span<const double> closes, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (closes.size() < 30) throw DegenerateSeries("at least 30 observations are required");
    for (double s : closes)
        if (!(s > 0.0)) throw DegenerateSeries("prices must be positive");
    const std::size_t n = closes.size() - 1;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += std::log(closes[i + 1] / closes[i]);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::log(closes[i + 1] / closes[i]) - mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(n - 1);
    if (var <= std::max(1e-24, 1e-16 * mean * mean))
        throw DegenerateSeries("log returns have zero variance");
    const double sigma2 = var / dt;
    return {mean / dt + 0.5 * sigma2, std::sqrt(sigma2)};
}

}  // namespace gstatarb
