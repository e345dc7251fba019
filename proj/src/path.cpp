#include "gstatarb/path.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "gstatarb/format.hpp"

namespace gstatarb {

namespace {

PricePath skeleton(const GbmParams& params) {
    params.validate();
    PricePath path;
    const auto n = static_cast<std::size_t>(params.n_steps);
    path.times.resize(n + 1);
    path.prices.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        path.times[k] = params.horizon * static_cast<double>(k) / static_cast<double>(n);
    path.prices[0] = params.s0;
    return path;
}

}  // namespace

PricePath simulate_gbm(const GbmParams& params, std::uint64_t seed) {
    PricePath path = skeleton(params);
    path.seed = seed;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const double dt = params.dt();
    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    const double vol = params.sigma * std::sqrt(dt);
    for (std::size_t k = 1; k < path.prices.size(); ++k)
        path.prices[k] = path.prices[k - 1] * std::exp(drift + vol * normal(rng));
    return path;
}

PricePath simulate_gbm_from_shocks(const GbmParams& params, std::span<const double> shocks) {
    PricePath path = skeleton(params);
    if (shocks.size() != static_cast<std::size_t>(params.n_steps))
        throw std::invalid_argument("one shock per step is required");
    const double dt = params.dt();
    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    const double vol = params.sigma * std::sqrt(dt);
    for (std::size_t k = 1; k < path.prices.size(); ++k)
        path.prices[k] = path.prices[k - 1] * std::exp(drift + vol * shocks[k - 1]);
    return path;
}

std::optional<Hit> next_hit(const PricePath& path, std::size_t from_index,
                            std::span<const double> levels) {
    const auto& s = path.prices;
    if (from_index >= s.size()) throw std::out_of_range("start index outside path");
    for (std::size_t k = from_index + 1; k < s.size(); ++k) {
        for (double level : levels) {
            const double before = s[k - 1] - level;
            const double now = s[k] - level;
            if (now == 0.0 || (before < 0.0) != (now < 0.0)) return Hit{k, level};
        }
    }
    return std::nullopt;
}

std::optional<Hit> next_exit(const PricePath& path, std::size_t from_index, double lower,
                             double upper) {
    const auto& s = path.prices;
    if (from_index >= s.size()) throw std::out_of_range("start index outside path");
    for (std::size_t k = from_index + 1; k < s.size(); ++k) {
        if (s[k] >= upper) return Hit{k, upper};
        if (s[k] <= lower) return Hit{k, lower};
    }
    return std::nullopt;
}

void TradeLedger::execute(std::size_t time_index, double price, double delta) {
    if (!(price > 0.0)) throw std::invalid_argument("execution price must be positive");
    events_.push_back({time_index, price, delta});
    cash_ -= delta * price;
    position_ += delta;
    traded_ += std::abs(delta);
}

double TradeLedger::close_out(std::size_t time_index, double price) {
    if (position_ != 0.0) execute(time_index, price, -position_);
    position_ = 0.0;
    return cash_;
}

void write_path_csv(const PricePath& path, std::ostream& out) {
    out << "t,price\n";
    for (std::size_t k = 0; k < path.prices.size(); ++k)
        out << format_double(path.times[k]) << ',' << format_double(path.prices[k]) << '\n';
}

}  // namespace gstatarb
