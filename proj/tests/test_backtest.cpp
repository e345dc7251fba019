#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gstatarb/backtest.hpp"
#include "gstatarb/errors.hpp"

using namespace gstatarb;

namespace {

void expect_parse_error_at(const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
        load_csv(in);
        ADD_FAILURE() << "no error for:\n" << text;
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), line) << e.what();
    }
}

}  // namespace

TEST(LoadCsv, ParsesCommentsAndBlankLines) {
    std::istringstream in("# source=test\ndate,close\n2020-01-02,10.5\n\n2020-01-03, 11\n");
    const auto s = load_csv(in);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.dates[1], "2020-01-03");
    EXPECT_EQ(s.closes[0], 10.5);
}

TEST(LoadCsv, ReportsLineNumbers) {
    expect_parse_error_at("date,price\n", 1);
    expect_parse_error_at("date,close\n2020-01-02,abc\n", 2);
    expect_parse_error_at("date,close\n2020-01-02,1\n2020-01-03,-4\n", 3);
    expect_parse_error_at("date,close\n2020-02-30,1\n", 2);
    expect_parse_error_at("date,close\n2020-01-02,1,2\n", 2);
    expect_parse_error_at("date,close\n2020-01-02,0\n", 2);
}

TEST(LoadCsv, RejectsNonMonotoneDates) {
    std::istringstream in("date,close\n2020-01-03,1\n2020-01-02,2\n");
    EXPECT_THROW(load_csv(in), NonMonotoneDates);
    std::istringstream dup("date,close\n2020-01-03,1\n2020-01-03,2\n");
    EXPECT_THROW(load_csv(dup), NonMonotoneDates);
}

TEST(LoadCsv, DumpRoundTrip) {
    const auto s = synthetic_series(0.12, 0.08, 300, 4);
    std::ostringstream out;
    dump_csv(s, out);
    std::istringstream in(out.str());
    const auto back = load_csv(in);
    EXPECT_EQ(back.dates, s.dates);
    EXPECT_EQ(back.closes, s.closes);
}

TEST(Backtest, InsufficientAndDegenerateData) {
    BacktestConfig cfg;
    EXPECT_THROW(run_backtest(synthetic_series(0.1, 0.1, cfg.window_days + 1, 1), cfg), InsufficientData);
    MarketSeries flat = synthetic_series(0.1, 0.1, 900, 1);
    for (double& c : flat.closes) c = 42.0;
    EXPECT_THROW(run_backtest(flat, cfg), DegenerateSeries);
    cfg.boundary_fraction = 0.6;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Backtest, EndsFlatWithConsistentTotals) {
    const auto s = synthetic_series(0.12, 0.08, 18 * 252, 21);
    const auto r = run_backtest(s, {});
    EXPECT_EQ(r.final_position, 0.0);
    EXPECT_EQ(r.ledger.open_position(), 0.0);
    ASSERT_FALSE(r.cycles.empty());
    double pnl = 0.0, qty = 0.0;
    for (const auto& c : r.cycles) {
        pnl += c.pnl;
        qty += c.traded_qty;
        EXPECT_LE(c.cycle_start, c.cycle_end);
    }
    EXPECT_NEAR(pnl, r.total_pnl, 1e-9 * std::max(1.0, std::abs(r.total_pnl)));
    EXPECT_NEAR(qty, r.traded_qty, 1e-9 * r.traded_qty);
    EXPECT_NEAR(r.gpta, r.total_pnl / r.traded_qty, 1e-12 * std::abs(r.gpta) + 1e-15);
    for (const auto& e : r.ledger.events()) EXPECT_GE(e.time_index, r.window_days);
}

TEST(Backtest, NoLookAhead) {
    const auto s = synthetic_series(0.12, 0.08, 8 * 252, 5);
    const auto base = run_backtest(s, {});
    const std::size_t cut = 5 * 252;
    auto perturbed = s;
    for (std::size_t i = cut; i < perturbed.size(); ++i) perturbed.closes[i] *= 1.0 + 0.05 * std::sin(i * 0.1);
    const auto other = run_backtest(perturbed, {});
    std::vector<TradeEvent> a, b;
    for (const auto& e : base.ledger.events())
        if (e.time_index < cut) a.push_back(e);
    for (const auto& e : other.ledger.events())
        if (e.time_index < cut) b.push_back(e);
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a, b);
}

TEST(Backtest, PriceScaling) {
    const auto s = synthetic_series(0.12, 0.08, 6 * 252, 9);
    auto scaled = s;
    const double lambda = 7.5;
    for (double& c : scaled.closes) c *= lambda;
    const auto r = run_backtest(s, {});
    const auto q = run_backtest(scaled, {});
    ASSERT_EQ(r.cycles.size(), q.cycles.size());
    EXPECT_NEAR(q.total_pnl, r.total_pnl, 1e-7 * std::max(1.0, std::abs(r.total_pnl)));
    EXPECT_NEAR(q.traded_qty, r.traded_qty / lambda, 1e-7 * r.traded_qty);
    EXPECT_NEAR(q.gpta, lambda * r.gpta, 1e-7 * std::abs(lambda * r.gpta) + 1e-12);
}

TEST(Backtest, OutputSchemas) {
    const auto s = synthetic_series(0.12, 0.08, 5 * 252, 13);
    BacktestConfig cfg;
    cfg.boundary_fraction = 0.05;
    const auto r = run_backtest(s, cfg);
    const auto doc = nlohmann::json::parse(backtest_summary_json(r));
    for (const char* k : {"gpta", "n_cycles", "total_pnl", "window_days", "boundary_fraction"})
        EXPECT_TRUE(doc.contains(k)) << k;
    EXPECT_EQ(doc["n_cycles"].get<std::size_t>(), r.cycles.size());
    EXPECT_EQ(doc["boundary_fraction"].get<double>(), 0.05);
    std::ostringstream out;
    write_cycles_csv(r, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "cycle_start,cycle_end,mu_hat,sigma_hat,orientation,pnl,traded_qty");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, r.cycles.size());
}
