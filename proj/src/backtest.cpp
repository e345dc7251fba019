#include "gstatarb/backtest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>

#include <json.hpp>

#include "gstatarb/errors.hpp"
#include "gstatarb/format.hpp"

namespace gstatarb {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool valid_iso_date(const std::string& d) {
    if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (d[i] < '0' || d[i] > '9') return false;
    const int year = std::stoi(d.substr(0, 4));
    const int month = std::stoi(d.substr(5, 2));
    const int day = std::stoi(d.substr(8, 2));
    if (month < 1 || month > 12 || day < 1) return false;
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return day <= kDays[month - 1] + (month == 2 && leap ? 1 : 0);
}

}  // namespace

MarketSeries load_csv(std::istream& in) {
    MarketSeries series;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "date,close") throw ParseError("expected header 'date,close'", line_no);
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ParseError("expected two fields", line_no);
        const std::string date = trim(line.substr(0, comma));
        const std::string close = trim(line.substr(comma + 1));
        if (!valid_iso_date(date)) throw ParseError("invalid date '" + date + "'", line_no);
        const auto price = parse_double(close);
        if (!price || !std::isfinite(*price)) throw ParseError("invalid price '" + close + "'", line_no);
        if (!(*price > 0.0)) throw ParseError("non-positive close " + close, line_no);
        if (!series.dates.empty() && !(series.dates.back() < date))
            throw NonMonotoneDates("line " + std::to_string(line_no) + ": date " + date +
                                   " does not follow " + series.dates.back());
        series.dates.push_back(date);
        series.closes.push_back(*price);
    }
    if (!header) throw ParseError("missing header 'date,close'", line_no);
    return series;
}

MarketSeries load_csv_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw ParseError("cannot open " + filename);
    return load_csv(in);
}

MarketSeries synthetic_series(double mu, double sigma, std::size_t n, std::uint64_t seed,
                              double s0) {
    if (n < 2) throw std::invalid_argument("synthetic series needs at least two points");
    const GbmParams p{mu, sigma, s0, static_cast<double>(n - 1) / 252.0, static_cast<int>(n - 1)};
    MarketSeries out;
    out.closes = simulate_gbm(p, seed).prices;
    std::chrono::sys_days day{std::chrono::year{2000} / 1 / 3};
    for (std::size_t i = 0; i < n; ++i) {
        while (std::chrono::weekday{day}.iso_encoding() > 5) day += std::chrono::days{1};
        const std::chrono::year_month_day ymd{day};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        out.dates.emplace_back(buf);
        day += std::chrono::days{1};
    }
    return out;
}

void dump_csv(const MarketSeries& series, std::ostream& out) {
    out << "date,close\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << series.dates[i] << ',' << format_double(series.closes[i]) << '\n';
}

void BacktestConfig::validate() const {
    if (window_days < 60) throw std::invalid_argument("window must cover at least 60 observations");
    if (!(boundary_fraction > 0.0 && boundary_fraction < 0.5))
        throw std::invalid_argument("boundary fraction must lie in (0, 1/2)");
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
}

BacktestResult run_backtest(const MarketSeries& series, const BacktestConfig& config) {
    config.validate();
    if (series.dates.size() != series.closes.size())
        throw std::invalid_argument("dates and closes differ in length");
    const std::size_t window = config.window_days;
    if (series.size() < window + 2)
        throw InsufficientData("series needs the estimation window plus at least two observations");

    PricePath path;
    for (std::size_t i = window; i < series.size(); ++i) {
        path.times.push_back(static_cast<double>(i - window) * config.dt);
        path.prices.push_back(series.closes[i]);
    }
    const std::span<const double> closes(series.closes);
    const double c = config.boundary_fraction;
    const double alpha = config.alpha;
    const double dt = config.dt;

    auto plan_fn = [&](std::size_t local, double anchor) {
        const std::size_t start = window + local;
        const MleEstimate est = mle_estimate(closes.subspan(start - window, window), dt);
        CyclePlan plan;
        plan.orientation =
            est.mu_hat >= 0.0 ? Orientation::PositiveDrift : Orientation::NegativeDrift;
        plan.c = c;
        plan.mu = est.mu_hat;
        plan.sigma = est.sigma_hat;
        const double q = embedded_q(c, est.mu_hat, est.sigma_hat);
        if (std::abs(q - 1.0) <= kTolerance) return plan;
        plan.strategy = embedded_phi(c, anchor, q);
        if (plan.orientation == Orientation::PositiveDrift || c < 0.25) {
            const auto weights = trend_weights(plan.orientation, c, est.mu_hat, est.sigma_hat);
            plan.lattice = grid_trend_lattice(plan.orientation, anchor, c, weights);
            plan.strategy = extend_gfin(*plan.lattice, plan.strategy, alpha);
        }
        return plan;
    };

    const RunResult run = run_schedule(path, plan_fn, ExecutionMode::Observed, false);

    BacktestResult out;
    out.window_days = window;
    out.boundary_fraction = c;
    out.total_pnl = run.pnl;
    out.traded_qty = run.ledger.traded_quantity();
    out.final_position = run.ledger.open_position();
    out.gpta = out.traded_qty > 0.0 ? out.total_pnl / out.traded_qty : 0.0;
    for (const auto& ev : run.ledger.events()) out.ledger.execute(ev.time_index + window, ev.price, ev.delta);
    for (const auto& rec : run.cycles) {
        out.cycles.push_back({series.dates[rec.start_index + window],
                              series.dates[rec.end_index + window], rec.plan.mu, rec.plan.sigma,
                              rec.plan.orientation, rec.pnl, rec.traded_qty});
    }
    return out;
}

std::string backtest_summary_json(const BacktestResult& r) {
    nlohmann::ordered_json j;
    j["gpta"] = r.gpta;
    j["n_cycles"] = r.cycles.size();
    j["total_pnl"] = r.total_pnl;
    j["window_days"] = r.window_days;
    j["boundary_fraction"] = r.boundary_fraction;
    return j.dump(2);
}

void write_cycles_csv(const BacktestResult& r, std::ostream& out) {
    out << "cycle_start,cycle_end,mu_hat,sigma_hat,orientation,pnl,traded_qty\n";
    for (const auto& c : r.cycles)
        out << c.cycle_start << ',' << c.cycle_end << ',' << format_double(c.mu_hat) << ','
            << format_double(c.sigma_hat) << ',' << to_string(c.orientation) << ','
            << format_double(c.pnl) << ',' << format_double(c.traded_qty) << '\n';
}

}  // namespace gstatarb
