#pragma once

// Test-side helpers: random model generators and Eigen reference solves.

#include <Eigen/Dense>

#include <array>
#include <random>

#include "gstatarb/lattice.hpp"

namespace oracle {

using gstatarb::Mat;
using gstatarb::Vec;

template <std::size_t N>
Eigen::Matrix<double, N, N> to_eigen(const Mat<N>& a) {
    Eigen::Matrix<double, N, N> m;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m(i, j) = a[i][j];
    return m;
}

template <std::size_t N>
Eigen::Matrix<double, N, 1> solve(const Mat<N>& a, const Eigen::Matrix<double, N, 1>& b) {
    return to_eigen(a).fullPivLu().solve(b);
}

inline std::array<double, 4> random_weights4(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::array<double, 4> w{};
    double s = 0.0;
    for (double& x : w) s += (x = u(rng));
    for (double& x : w) x /= s;
    return w;
}

inline std::array<double, 5> random_weights5(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::array<double, 5> w{};
    double s = 0.0;
    for (double& x : w) s += (x = u(rng));
    for (double& x : w) x /= s;
    return w;
}

inline gstatarb::BinomialPrices random_binomial_prices(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> s0d(20.0, 200.0), f(0.02, 0.3), g(0.1, 0.9);
    const double s0 = s0d(rng);
    const double up = s0 * (1 + f(rng));
    const double down = s0 * (1 - f(rng));
    const double uu = up * (1 + f(rng));
    const double ud = down + g(rng) * (up - down);
    const double dd = down * (1 - f(rng));
    return {s0, up, down, uu, ud, dd};
}

inline gstatarb::TwoPeriodBinomial random_binomial(std::mt19937_64& rng) {
    return {random_binomial_prices(rng), random_weights4(rng)};
}

inline gstatarb::TrendLattice random_trend(std::mt19937_64& rng, gstatarb::Orientation o,
                                           bool gfin_ordering) {
    std::uniform_real_distribution<double> f(0.02, 0.3), g(0.1, 0.9);
    const auto b = random_binomial_prices(rng);
    gstatarb::TrendPrices p{b.s0, b.up, b.down, b.uu, b.ud, b.dd, 0.0, 0.0};
    if (o == gstatarb::Orientation::PositiveDrift) {
        p.trend_up = b.uu * (1 + f(rng));
        p.trend_down = gfin_ordering ? b.s0 * (1 - 0.5 * f(rng)) : b.uu * (1 - g(rng) * 0.5);
    } else {
        p.trend_down = b.dd * (1 - f(rng));
        p.trend_up = gfin_ordering ? b.s0 * (1 + 0.5 * f(rng)) : b.dd * (1 + g(rng) * 0.5);
    }
    return {o, p, random_weights5(rng)};
}

}  // namespace oracle
