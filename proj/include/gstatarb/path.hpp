#pragma once

// Simulated price paths, barrier detection and trade bookkeeping.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gstatarb/gbm.hpp"

namespace gstatarb {

struct PricePath {
    std::vector<double> times;
    std::vector<double> prices;
    std::uint64_t seed = 0;

    std::size_t last_index() const noexcept { return prices.size() - 1; }
};

/// Exact log-normal stepping driven by std::mt19937_64 seeded with `seed`.
PricePath simulate_gbm(const GbmParams& params, std::uint64_t seed);

/// Same stepping with caller-supplied standard normal shocks (one per step).
PricePath simulate_gbm_from_shocks(const GbmParams& params, std::span<const double> shocks);

struct Hit {
    std::size_t index = 0;
    double level = 0.0;
};

/// First index after `from_index` where the path touches a level or crosses it
/// between consecutive grid points. nullopt when no such index exists up to and
/// including the last one.
std::optional<Hit> next_hit(const PricePath& path, std::size_t from_index,
                            std::span<const double> levels);

/// First index after `from_index` with price >= upper or price <= lower. The
/// returned level is the side that was reached.
std::optional<Hit> next_exit(const PricePath& path, std::size_t from_index, double lower,
                             double upper);

struct TradeEvent {
    std::size_t time_index = 0;
    double price = 0.0;
    double delta = 0.0;

    friend bool operator==(const TradeEvent&, const TradeEvent&) = default;
};

class TradeLedger {
public:
    /// Buys `delta` units (sells when negative) at `price`.
    void execute(std::size_t time_index, double price, double delta);

    /// Liquidates the open position and returns the cumulative P&L.
    double close_out(std::size_t time_index, double price);

    double cash() const noexcept { return cash_; }
    double open_position() const noexcept { return position_; }
    double mark_to_market(double price) const noexcept { return cash_ + position_ * price; }
    double traded_quantity() const noexcept { return traded_; }
    const std::vector<TradeEvent>& events() const noexcept { return events_; }

    friend bool operator==(const TradeLedger&, const TradeLedger&) = default;

private:
    std::vector<TradeEvent> events_;
    double cash_ = 0.0;
    double position_ = 0.0;
    double traded_ = 0.0;
};

/// CSV with header `t,price`.
void write_path_csv(const PricePath& path, std::ostream& out);

}  // namespace gstatarb
