#pragma once

// Walk-forward application of the final-value strategy to daily closing prices.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gstatarb/strategies.hpp"

namespace gstatarb {

struct MarketSeries {
    std::vector<std::string> dates;  ///< ISO-8601 YYYY-MM-DD, strictly increasing
    std::vector<double> closes;

    std::size_t size() const noexcept { return closes.size(); }
};

/// Reads CSV with header `date,close`. Throws ParseError (1-based line) or NonMonotoneDates.
MarketSeries load_csv(std::istream& in);
MarketSeries load_csv_file(const std::string& filename);

/// `n` daily GBM closes on consecutive weekdays from 2000-01-03, dt = 1/252.
MarketSeries synthetic_series(double mu, double sigma, std::size_t n, std::uint64_t seed,
                              double s0 = 100.0);

/// Writes the same format with round-trip exact prices.
void dump_csv(const MarketSeries& series, std::ostream& out);

struct BacktestConfig {
    std::size_t window_days = 756;
    double boundary_fraction = 0.10;
    double alpha = 0.0;
    double dt = 1.0 / 252.0;

    void validate() const;
};

struct BacktestCycle {
    std::string cycle_start;
    std::string cycle_end;
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
    Orientation orientation = Orientation::PositiveDrift;
    double pnl = 0.0;
    double traded_qty = 0.0;
};

struct BacktestResult {
    double gpta = 0.0;
    double total_pnl = 0.0;
    double traded_qty = 0.0;
    double final_position = 0.0;
    std::size_t window_days = 0;
    double boundary_fraction = 0.0;
    std::vector<BacktestCycle> cycles;
    TradeLedger ledger;  ///< time indices refer to the full series
};

/// Each cycle starts with an estimate from the `window_days` closes strictly
/// before its start and trades the orientation selected by the sign of mu_hat.
BacktestResult run_backtest(const MarketSeries& series, const BacktestConfig& config);

/// JSON object {gpta, n_cycles, total_pnl, window_days, boundary_fraction}.
std::string backtest_summary_json(const BacktestResult& result);

/// Header `cycle_start,cycle_end,mu_hat,sigma_hat,orientation,pnl,traded_qty`.
void write_cycles_csv(const BacktestResult& result, std::ostream& out);

}  // namespace gstatarb
