#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gstatarb/errors.hpp"
#include "gstatarb/gbm.hpp"
#include "gstatarb/path.hpp"

using namespace gstatarb;

namespace {

// Direct power-form evaluation of the lower exit probability.
double lower_power_form(double s0, double a, double b, double mu, double sigma) {
    const double nu = mu / (sigma * sigma) - 0.5;
    const double an = std::abs(nu);
    return std::pow(a / s0, nu) * (std::pow(b / s0, an) - std::pow(s0 / b, an)) /
           (std::pow(b / a, an) - std::pow(a / b, an));
}

// Single-display transcription of the embedded ratio, evaluated in extended precision.
double q_display(double c_in, double mu, double sigma) {
    using std::pow;
    const long double c = c_in;
    const long double nu = static_cast<long double>(mu) / (static_cast<long double>(sigma) * sigma) - 0.5L;
    const long double an = nu < 0 ? -nu : nu;
    const long double f1 = (pow(1 + c, an) - pow(1 + c, -an)) /
                           (pow((1 + c) / (1 - c), an) - pow((1 - c) / (1 + c), an));
    const long double down_first = pow(1 - c, nu) * f1;
    const long double back_from_up = pow(1 + c, -nu) *
                                     (pow((1 + 2 * c) / (1 + c), an) - pow((1 + c) / (1 + 2 * c), an)) /
                                     (pow(1 + 2 * c, an) - pow(1 + 2 * c, -an));
    const long double back_from_down =
        1 - pow((1 - 2 * c) / (1 - c), nu) * (pow(1 - c, -an) - pow(1 - c, an)) /
                (pow(1 - 2 * c, -an) - pow(1 - 2 * c, an));
    return static_cast<double>((1 - down_first) * back_from_up / (down_first * back_from_down));
}

}  // namespace

TEST(ExitProbability, Boundaries) {
    EXPECT_EQ(exit_prob_lower(90, 90, 110, 0.1, 0.2), 1.0);
    EXPECT_EQ(exit_prob_lower(110, 90, 110, 0.1, 0.2), 0.0);
    EXPECT_EQ(exit_prob_upper(90, 90, 110, 0.1, 0.2), 0.0);
    EXPECT_EQ(exit_prob_upper(110, 90, 110, 0.1, 0.2), 1.0);
}

TEST(ExitProbability, DriftlessLimit) {
    const double sigma = 0.2, mu = sigma * sigma / 2;
    const double expected = std::log(1.1) / std::log(11.0 / 9.0);
    EXPECT_NEAR(exit_prob_lower(100, 90, 110, mu, sigma), expected, 1e-12);
    EXPECT_NEAR(expected, 0.47496, 5e-6);
    // Continuity across the switch.
    EXPECT_NEAR(exit_prob_lower(100, 90, 110, mu + 1e-7, sigma), expected, 1e-6);
}

TEST(ExitProbability, InvalidIntervals) {
    EXPECT_THROW(exit_prob_lower(100, 110, 90, 0.1, 0.2), InvalidInterval);
    EXPECT_THROW(exit_prob_lower(120, 90, 110, 0.1, 0.2), InvalidInterval);
    EXPECT_THROW(exit_prob_lower(100, 0, 110, 0.1, 0.2), InvalidInterval);
    EXPECT_THROW(exit_prob_lower(100, 90, 110, 0.1, 0.0), InvalidInterval);
}

TEST(ExitProbability, MatchesPowerFormAndComplements) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mu(-0.5, 0.5), sig(0.05, 0.6), w(0.01, 0.4), t(0.05, 0.95);
    for (int i = 0; i < 2000; ++i) {
        const double m = mu(rng), s = sig(rng);
        const double a = 100 * (1 - w(rng)), b = 100 * (1 + w(rng));
        const double x = a + t(rng) * (b - a);
        const double lo = exit_prob_lower(x, a, b, m, s);
        const double up = exit_prob_upper(x, a, b, m, s);
        EXPECT_GE(lo, 0.0);
        EXPECT_LE(lo, 1.0);
        EXPECT_NEAR(lo + up, 1.0, 1e-12);
        if (std::abs(m / (s * s) - 0.5) > 1e-3) EXPECT_NEAR(lo, lower_power_form(x, a, b, m, s), 1e-9);
    }
}

TEST(ExitProbability, DecreasingInStart) {
    for (double mu : {-0.3, 0.0, 0.02, 0.1241, 0.8}) {
        double prev = 1.0;
        for (double x = 90.0; x <= 110.0; x += 0.5) {
            const double p = exit_prob_lower(x, 90, 110, mu, 0.2);
            EXPECT_LE(p, prev + 1e-15);
            prev = p;
        }
    }
}

TEST(ExitProbability, LargeDriftStaysFinite) {
    const double p = exit_prob_lower(100, 99, 101, 5.0, 0.01);
    EXPECT_TRUE(std::isfinite(p));
    EXPECT_GE(p, 0.0);
    EXPECT_LT(p, 1e-100);
    const double q = exit_prob_lower(100, 99, 101, -5.0, 0.01);
    EXPECT_NEAR(q, 1.0, 1e-12);
}

TEST(EmbeddedQ, ReferenceParameters) {
    const double mu = 0.1241, sigma = 0.0837, c = 0.01 * mu / sigma;
    EXPECT_NEAR(embedded_q(c, mu, sigma), 1.00189, 5e-6);
}

TEST(EmbeddedQ, SmallStepLimit) {
    EXPECT_NEAR(embedded_q(1e-6, 0.1241, 0.0837), 1.0, 1e-4);
}

TEST(EmbeddedQ, MatchesDisplayTranscription) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> mu(-0.2, 0.2), sig(0.1, 0.5), c(0.001, 0.1);
    for (int i = 0; i < 1000; ++i) {
        const double m = mu(rng), s = sig(rng), cc = c(rng);
        if (std::abs(m / (s * s) - 0.5) < 1e-3) continue;
        const double q = embedded_q(cc, m, s);
        EXPECT_NEAR(q, q_display(cc, m, s), 1e-11 * std::max(1.0, q));
    }
}

TEST(EmbeddedQ, HighPrecisionReferences) {
    // Reference values from a 60-digit evaluation of the same expression.
    struct Case {
        double mu, sigma, c, q;
    };
    const Case cases[] = {
        {-0.34955829655294718, 0.072055793748992444, 0.13158429573493338, 10.689930116851283894},
        {-0.28858923043775614, 0.11040066617224112, 0.19152686935494961, 6.0895569827036430352},
        {-0.25646393183663818, 0.069853151451840415, 0.15434902360105546, 12.919748291296842715},
        {-0.26546594739361074, 0.059042576144896664, 0.12175938248123602, 9.8728100989581314944},
        {0.22861178232988444, 0.055687548928215744, 0.15423394459077258, 33.974465094028395127}};
    for (const auto& k : cases) EXPECT_NEAR(embedded_q(k.c, k.mu, k.sigma), k.q, 1e-13 * k.q);
}

TEST(EmbeddedQ, AboveOneForPositiveScaledDrift) {
    for (double mu : {0.05, 0.1, 0.3})
        for (double sigma : {0.05, 0.1, 0.2})
            for (double c : {0.001, 0.01, 0.05}) {
                if (mu <= sigma * sigma / 2) continue;
                EXPECT_GT(embedded_q(c, mu, sigma), 1.0) << mu << ' ' << sigma << ' ' << c;
            }
    EXPECT_LT(embedded_q(0.01, 0.005, 0.2), 1.0);
}

TEST(EmbeddedQ, RejectsStepOutsideRange) {
    EXPECT_THROW(embedded_q(0.5, 0.1, 0.2), InvalidInterval);
    EXPECT_THROW(embedded_q(0.0, 0.1, 0.2), InvalidInterval);
}

TEST(EmbeddedWeights, SumToOneAndReproduceQ) {
    const double mu = 0.1241, sigma = 0.0837, c = 0.0148;
    const auto w = embedded_weights(c, mu, sigma);
    EXPECT_NEAR(w[0] + w[1] + w[2] + w[3], 1.0, 1e-12);
    EXPECT_NEAR(w[1] / w[2], embedded_q(c, mu, sigma), 1e-12);
    for (auto o : {Orientation::PositiveDrift, Orientation::NegativeDrift}) {
        const auto t = trend_weights(o, c, mu, sigma);
        double s = 0.0;
        for (double v : t) s += v;
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
    EXPECT_THROW(trend_weights(Orientation::NegativeDrift, 0.3, mu, sigma), InvalidInterval);
}

TEST(EmbeddedPhi, MatchesLatticeSolver) {
    std::mt19937_64 rng(12);
    // Dyadic steps and integer anchors keep every grid price exact.
    std::uniform_real_distribution<double> qd(0.5, 1.8);
    std::uniform_int_distribution<int> kd(4, 800), sd(10, 5000);
    for (int i = 0; i < 1000; ++i) {
        const double q = qd(rng), c = kd(rng) / 4096.0, s0 = sd(rng);
        if (std::abs(q - 1.0) < 1e-3) continue;
        const double w3 = 0.2;
        const auto m = grid_binomial(s0, c, {0.3, q * w3, w3, 0.5 - q * w3});
        const auto ref = solve_binomial_sa(m);
        const auto phi = embedded_phi(c, s0, m.q());
        EXPECT_NEAR(phi.phi1, ref.phi1, 1e-12 * std::abs(ref.phi1));
        EXPECT_NEAR(phi.phi2_up, ref.phi2_up, 1e-12 * std::abs(ref.phi2_up));
        EXPECT_NEAR(phi.phi2_down, ref.phi2_down, 1e-12 * std::abs(ref.phi2_down));
    }
}

TEST(EmbeddedPhi, PrintedDenominatorDiffers) {
    const double q = 1.2, c = 0.05, s0 = 100;
    const auto d = embedded_denominators(c, s0, q);
    EXPECT_NEAR(d.corrected / d.printed, (q - 1) / (q - 2), 1e-12);
    const auto m = grid_binomial(s0, c, {0.3, 0.24, 0.2, 0.26});
    const auto ref = solve_binomial_sa(m);
    const double printed_phi1 = (2 + q) * (c * s0) * (c * s0) / d.printed;
    EXPECT_GT(std::abs(printed_phi1 - ref.phi1), 0.1 * std::abs(ref.phi1));
}

TEST(EmbeddedPhi, UnitRatioAndReferenceCase) {
    EXPECT_THROW(embedded_phi(0.01, 100, 1.0), NoSaExists);
    const auto phi = embedded_phi(0.0148268, 2186, 1.00189);
    EXPECT_TRUE(std::isfinite(phi.phi1));
    EXPECT_GT(phi.phi1, 0.0);
}

TEST(Mle, DegenerateSeries) {
    EXPECT_THROW(mle_estimate(std::vector<double>(100, 50.0), 1.0 / 252), DegenerateSeries);
    std::vector<double> growth;
    for (int k = 0; k < 100; ++k) growth.push_back(std::exp(0.001 * k) * 30);
    EXPECT_THROW(mle_estimate(growth, 1.0 / 252), DegenerateSeries);
    EXPECT_THROW(mle_estimate(std::vector<double>{1, 2, 3}, 1.0 / 252), DegenerateSeries);
}

TEST(Mle, RecoversSimulatedParameters) {
    const GbmParams p{0.1, 0.2, 100, 3.0, 756};
    const double n = 756;
    const double se_sigma = p.sigma / std::sqrt(2 * (n - 1));
    const double se_mu = p.sigma / std::sqrt(p.horizon);
    int inside = 0;
    double mu_sum = 0.0, sigma_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto path = simulate_gbm(p, seed + 1000);
        const auto est = mle_estimate(path.prices, p.dt());
        inside += std::abs(est.mu_hat - p.mu) <= 3 * se_mu &&
                  std::abs(est.sigma_hat - p.sigma) <= 3 * se_sigma;
        mu_sum += est.mu_hat;
        sigma_sum += est.sigma_hat;
    }
    EXPECT_GE(inside, 97);
    EXPECT_NEAR(mu_sum / 100, p.mu, 3 * se_mu / 10);
    EXPECT_NEAR(sigma_sum / 100, p.sigma, 3 * se_sigma / 10);
}
