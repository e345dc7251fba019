#include "gstatarb/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gstatarb/errors.hpp"

namespace gstatarb {

namespace {

template <std::size_t N>
void check_weights(const std::array<double, N>& w) {
    for (double p : w)
        if (!(p > 0.0) || !std::isfinite(p))
            throw InvalidModel("path weights must be strictly positive");
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw InvalidModel("path weights must sum to 1");
}

void require(bool ok, const char* what) {
    if (!ok) throw InvalidModel(what);
}

void check_binomial_orderings(double s0, double up, double down, double uu, double ud, double dd) {
    require(up > s0 && s0 > down, "first period requires up > s0 > down");
    require(uu > up, "second period requires uu > up");
    require(down < ud && ud < up, "second period requires down < ud < up");
    require(dd < down, "second period requires dd < down");
}

template <std::size_t N>
double max_abs_of(const std::array<double, N>& a, const std::array<double, N>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max({m, std::abs(a[i]), std::abs(b[i])});
    return m;
}

double binomial_scale(const TwoPeriodBinomial& m) {
    double s = 0.0;
    for (int w = 1; w <= 4; ++w) s = std::max({s, std::abs(m.dS1(w)), std::abs(m.dS2(w))});
    return s;
}

double trend_scale(const TrendLattice& m) {
    double s = 0.0;
    for (int w = 1; w <= 5; ++w)
        s = std::max({s, std::abs(m.dS1(w)), std::abs(m.dS2(w)), std::abs(m.dS3(w))});
    return s;
}

bool is_degenerate(double value, double scale, int power) {
    return std::abs(value) <= kTolerance * std::pow(scale, power);
}

// Denominator shared by the two-period closed forms. Equals -det(A).
template <class Model>
double sa_denominator(const Model& m, double q) {
    return (q * m.dS1(1) * m.dS2(2) + (-m.dS1(3) - q * m.dS1(2)) * m.dS2(1)) * m.dS2(4) +
           m.dS1(4) * m.dS2(1) * m.dS2(3);
}

}  // namespace

// ---------------------------------------------------------------------------

double StrategyVector::component(Slot slot) const {
    switch (slot) {
        case Slot::First: return phi1;
        case Slot::SecondUp: return phi2_up;
        case Slot::SecondDown: return phi2_down;
        case Slot::Third: return phi3.value_or(0.0);
    }
    return 0.0;
}

StrategyVector StrategyVector::scaled(double factor) const {
    StrategyVector s{phi1 * factor, phi2_up * factor, phi2_down * factor, std::nullopt};
    if (phi3) s.phi3 = *phi3 * factor;
    return s;
}

// ---------------------------------------------------------------------------

TwoPeriodBinomial::TwoPeriodBinomial(BinomialPrices prices, std::array<double, 4> weights)
    : prices_(prices), weights_(weights) {
    const auto& p = prices_;
    check_binomial_orderings(p.s0, p.up, p.down, p.uu, p.ud, p.dd);
    check_weights(weights_);
    first_ = {p.up - p.s0, p.up - p.s0, p.down - p.s0, p.down - p.s0};
    second_ = {p.uu - p.up, p.ud - p.up, p.ud - p.down, p.dd - p.down};
}

std::vector<LatticePath> TwoPeriodBinomial::paths() const {
    std::vector<LatticePath> out;
    const int nodes[4] = {0, 1, 1, 2};
    for (std::size_t i = 0; i < 4; ++i) {
        const Slot second = i < 2 ? Slot::SecondUp : Slot::SecondDown;
        out.push_back({{first_[i], second_[i]}, {Slot::First, second}, nodes[i], weights_[i]});
    }
    return out;
}

TwoPeriodBinomial TwoPeriodBinomial::scaled(double lambda) const {
    const auto& p = prices_;
    return {{lambda * p.s0, lambda * p.up, lambda * p.down, lambda * p.uu, lambda * p.ud,
             lambda * p.dd},
            weights_};
}

TwoPeriodBinomial TwoPeriodBinomial::with_weights(std::array<double, 4> weights) const {
    return {prices_, weights};
}

// ---------------------------------------------------------------------------

TrinomialTopModel::TrinomialTopModel(TrinomialPrices prices, std::array<double, 6> weights)
    : prices_(prices), weights_(weights) {
    const auto& p = prices_;
    require(p.up > p.s0 && p.s0 > p.down, "first period requires up > s0 > down");
    require(p.top > p.uu && p.uu > p.ud && p.ud > p.dd && p.dd > 0.0,
            "second period requires top > uu > ud > dd > 0");
    require(p.uu > p.up, "second period requires uu > up");
    require(p.down < p.ud && p.ud < p.up, "second period requires down < ud < up");
    require(p.dd < p.down, "second period requires dd < down");
    check_weights(weights_);
    first_ = {p.up - p.s0, p.up - p.s0, p.up - p.s0, p.down - p.s0, p.down - p.s0, p.down - p.s0};
    second_ = {p.top - p.up, p.uu - p.up, p.ud - p.up, p.top - p.down, p.ud - p.down, p.dd - p.down};
}

std::vector<LatticePath> TrinomialTopModel::paths() const {
    std::vector<LatticePath> out;
    const int nodes[6] = {0, 1, 2, 0, 2, 3};
    for (std::size_t i = 0; i < 6; ++i) {
        const Slot second = i < 3 ? Slot::SecondUp : Slot::SecondDown;
        out.push_back({{first_[i], second_[i]}, {Slot::First, second}, nodes[i], weights_[i]});
    }
    return out;
}

TrinomialTopModel TrinomialTopModel::scaled(double lambda) const {
    const auto& p = prices_;
    return {{lambda * p.s0, lambda * p.up, lambda * p.down, lambda * p.top, lambda * p.uu,
             lambda * p.ud, lambda * p.dd},
            weights_};
}

TrinomialTopModel TrinomialTopModel::with_weights(std::array<double, 6> weights) const {
    return {prices_, weights};
}

// ---------------------------------------------------------------------------

TrendLattice::TrendLattice(Orientation orientation, TrendPrices prices,
                           std::array<double, 5> weights)
    : orientation_(orientation), prices_(prices), weights_(weights) {
    const auto& p = prices_;
    check_binomial_orderings(p.s0, p.up, p.down, p.uu, p.ud, p.dd);
    check_weights(weights_);
    const double s0 = p.s0;
    if (orientation_ == Orientation::PositiveDrift) {
        require(p.trend_down < p.uu && p.uu < p.trend_up,
                "third period requires trend_down < uu < trend_up");
        first_ = {p.up - s0, p.up - s0, p.down - s0, p.down - s0, p.up - s0};
        second_ = {p.uu - p.up, p.ud - p.up, p.ud - p.down, p.dd - p.down, p.uu - p.up};
        third_ = {p.trend_up - p.uu, 0.0, 0.0, 0.0, p.trend_down - p.uu};
    } else {
        require(p.trend_down < p.dd && p.dd < p.trend_up,
                "third period requires trend_down < dd < trend_up");
        first_ = {p.up - s0, p.up - s0, p.down - s0, p.down - s0, p.down - s0};
        second_ = {p.uu - p.up, p.ud - p.up, p.ud - p.down, p.dd - p.down, p.dd - p.down};
        third_ = {0.0, 0.0, 0.0, p.trend_down - p.dd, p.trend_up - p.dd};
    }
}

std::vector<LatticePath> TrendLattice::paths() const {
    std::vector<LatticePath> out;
    const int nodes[5] = {0, 1, 1, 2, 3};
    const bool positive = orientation_ == Orientation::PositiveDrift;
    for (std::size_t i = 0; i < 5; ++i) {
        const bool up_first = positive ? (i < 2 || i == 4) : i < 2;
        LatticePath path;
        path.increments = {first_[i], second_[i]};
        path.slots = {Slot::First, up_first ? Slot::SecondUp : Slot::SecondDown};
        const bool continues = positive ? (i == 0 || i == 4) : (i == 3 || i == 4);
        if (continues) {
            path.increments.push_back(third_[i]);
            path.slots.push_back(Slot::Third);
        }
        path.terminal_node = nodes[i];
        path.weight = weights_[i];
        out.push_back(std::move(path));
    }
    return out;
}

TrendLattice TrendLattice::scaled(double lambda) const {
    const auto& p = prices_;
    return {orientation_,
            {lambda * p.s0, lambda * p.up, lambda * p.down, lambda * p.uu, lambda * p.ud,
             lambda * p.dd, lambda * p.trend_up, lambda * p.trend_down},
            weights_};
}

TwoPeriodBinomial TrendLattice::embedded_binomial() const {
    const auto& p = prices_;
    const auto& w = weights_;
    std::array<double, 4> sub = orientation_ == Orientation::PositiveDrift
                                    ? std::array<double, 4>{w[0] + w[4], w[1], w[2], w[3]}
                                    : std::array<double, 4>{w[0], w[1], w[2], w[3] + w[4]};
    return {{p.s0, p.up, p.down, p.uu, p.ud, p.dd}, sub};
}

std::vector<LatticePath> paths(const LatticeModel& model) {
    return std::visit([](const auto& m) { return m.paths(); }, model);
}

// ---------------------------------------------------------------------------

void ScenarioPartition::validate(std::size_t n_paths) const {
    std::vector<int> seen(n_paths, 0);
    for (const auto& cell : cells) {
        if (cell.empty()) throw InvalidPartition("empty cell");
        for (std::size_t idx : cell) {
            if (idx >= n_paths) throw InvalidPartition("cell refers to unknown path");
            if (seen[idx]++) throw InvalidPartition("cells overlap");
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw InvalidPartition("cells do not cover every path");
}

ScenarioPartition terminal_partition(const LatticeModel& model) {
    const auto ps = paths(model);
    ScenarioPartition part;
    std::vector<int> node_ids;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        auto it = std::find(node_ids.begin(), node_ids.end(), ps[i].terminal_node);
        if (it == node_ids.end()) {
            node_ids.push_back(ps[i].terminal_node);
            part.cells.push_back({i});
        } else {
            part.cells[static_cast<std::size_t>(it - node_ids.begin())].push_back(i);
        }
    }
    return part;
}

ScenarioPartition final_value_partition(const TrendLattice& model) {
    if (model.orientation() == Orientation::PositiveDrift) return {{{0, 1, 2}, {3, 4}}};
    return {{{0, 4}, {1, 2, 3}}};
}

double payoff(const LatticeModel& model, const StrategyVector& strategy, std::size_t path) {
    const auto ps = paths(model);
    if (path >= ps.size()) throw UnknownPath("path index " + std::to_string(path) + " out of range");
    const auto& p = ps[path];
    double gain = 0.0;
    for (std::size_t t = 0; t < p.increments.size(); ++t)
        gain += strategy.component(p.slots[t]) * p.increments[t];
    return gain;
}

double expected_payoff(const LatticeModel& model, const StrategyVector& strategy) {
    const auto ps = paths(model);
    double mean = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) mean += ps[i].weight * payoff(model, strategy, i);
    return mean;
}

std::vector<double> weighted_cell_gains(const LatticeModel& model, const StrategyVector& strategy,
                                        const ScenarioPartition& partition) {
    const auto ps = paths(model);
    partition.validate(ps.size());
    std::vector<double> out;
    out.reserve(partition.cells.size());
    for (const auto& cell : partition.cells) {
        double sum = 0.0;
        for (std::size_t idx : cell) sum += ps[idx].weight * payoff(model, strategy, idx);
        out.push_back(sum);
    }
    return out;
}

std::vector<double> conditional_gains(const LatticeModel& model, const StrategyVector& strategy,
                                      const ScenarioPartition& partition) {
    const auto ps = paths(model);
    auto sums = weighted_cell_gains(model, strategy, partition);
    for (std::size_t c = 0; c < sums.size(); ++c) {
        double mass = 0.0;
        for (std::size_t idx : partition.cells[c]) mass += ps[idx].weight;
        sums[c] /= mass;
    }
    return sums;
}

bool is_statistical_arbitrage(const LatticeModel& model, const StrategyVector& strategy,
                              const ScenarioPartition& partition) {
    const auto gains = conditional_gains(model, strategy, partition);
    const bool cells_ok =
        std::all_of(gains.begin(), gains.end(), [](double g) { return g >= -kTolerance; });
    return cells_ok && expected_payoff(model, strategy) > kTolerance;
}

// ---------------------------------------------------------------------------

std::string to_string(NsaStatus status) {
    switch (status) {
        case NsaStatus::NsaCertified: return "NsaCertified";
        case NsaStatus::SaExists: return "SaExists";
        case NsaStatus::NotCertified: return "NotCertified";
    }
    return "unknown";
}

Matrix3 binomial_A_matrix(const TwoPeriodBinomial& m) {
    const double q = m.q();
    return {{{m.dS1(1), m.dS2(1), 0.0},
             {m.dS1(4), 0.0, m.dS2(4)},
             {q * m.dS1(2) + m.dS1(3), q * m.dS2(2), m.dS2(3)}}};
}

double tilde_q(const TwoPeriodBinomial& m) {
    const double num = m.dS2(1) * (m.dS1(3) * m.dS2(4) - m.dS1(4) * m.dS2(3));
    const double den = m.dS2(4) * (m.dS1(1) * m.dS2(2) - m.dS1(2) * m.dS2(1));
    if (is_degenerate(den, binomial_scale(m), 3))
        throw DegenerateModel("critical weight ratio has a zero denominator");
    return num / den;
}

NsaCertificate nsa_binomial(const TwoPeriodBinomial& m) {
    const double qt = tilde_q(m);
    const Matrix3 a = binomial_A_matrix(m);
    NsaCertificate cert;
    cert.status = std::abs(m.q() - qt) <= kTolerance ? NsaStatus::NsaCertified : NsaStatus::SaExists;
    cert.diagnostics = {{"det_A", determinant(a)}, {"q", m.q()}, {"q_tilde", qt}};
    return cert;
}

std::array<double, 4> emm_binomial(const TwoPeriodBinomial& m) {
    const double lower = m.dS1(3) * m.dS2(4) - m.dS1(4) * m.dS2(3);
    const double upper = m.dS1(1) * m.dS2(2) - m.dS1(2) * m.dS2(1);
    const std::array<double, 4> raw = {m.dS2(2) * lower, -m.dS2(1) * lower, -m.dS2(4) * upper,
                                       m.dS2(3) * upper};
    const double b =
        m.dS2(2) * ((m.dS1(3) - m.dS1(1)) * m.dS2(4) + (m.dS1(1) - m.dS1(4)) * m.dS2(3)) +
        m.dS2(1) * ((m.dS1(2) - m.dS1(3)) * m.dS2(4) + (m.dS1(4) - m.dS1(2)) * m.dS2(3));
    if (is_degenerate(b, binomial_scale(m), 3))
        throw DegenerateModel("martingale measure normaliser vanishes");
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = raw[i] / b;
        if (!(out[i] > 0.0)) throw DegenerateModel("martingale measure is not equivalent");
    }
    return out;
}

StrategyVector solve_binomial_sa(const TwoPeriodBinomial& m) {
    const double q = m.q();
    if (std::abs(q - tilde_q(m)) <= kTolerance)
        throw NoSaExists("weight ratio equals the critical ratio");
    const double xi1 = (q * m.dS2(2) - m.dS2(1)) * m.dS2(4) + m.dS2(1) * m.dS2(3);
    const double xi2 = -(m.dS1(3) + q * m.dS1(2) - m.dS1(1)) * m.dS2(4) -
                       (m.dS1(1) - m.dS1(4)) * m.dS2(3);
    const double xi3 = -(q * m.dS1(4) - q * m.dS1(1)) * m.dS2(2) -
                       (-m.dS1(4) + m.dS1(3) + q * m.dS1(2)) * m.dS2(1);
    const double d = sa_denominator(m, q);
    if (is_degenerate(d, binomial_scale(m), 3)) throw DegenerateModel("singular constraint matrix");
    return {xi1 / d, xi2 / d, xi3 / d, std::nullopt};
}

// ---------------------------------------------------------------------------

NsaCertificate trinomial_nsa(const TrinomialTopModel& m) {
    double scale = 0.0;
    for (int w = 1; w <= 6; ++w) scale = std::max({scale, std::abs(m.dS1(w)), std::abs(m.dS2(w))});

    const double den1 = m.dS1(3) - m.dS2(3) * m.dS1(2) / m.dS2(2);
    const double den2 = m.dS1(3) - m.dS1(1) * m.dS2(3) / m.dS2(1);
    if (is_degenerate(den1, scale, 1) || is_degenerate(den2, scale, 1))
        throw DegenerateModel("zero divisor in the certificate bounds");
    const double gamma1 = (-m.dS1(5) + m.dS2(5) * m.dS1(6) / m.dS2(6)) / den1;
    const double gamma2 =
        (m.dS1(6) / m.dS2(6) * (m.dS2(4) + m.dS2(5)) - m.dS1(4) - m.dS1(5)) / den2;

    const auto& p = m.weights();
    const double nu1 = p[0] / p[3];
    const double nu2 = p[2] / p[4];
    const double link = -m.dS2(3) / m.dS2(1);

    const bool linked = std::abs(nu1 - link * nu2) <= kTolerance * std::max(1.0, std::abs(nu1));
    const bool bounded = nu2 - gamma1 > kTolerance && nu2 <= gamma2 + kTolerance;

    NsaCertificate cert;
    cert.status = linked && bounded ? NsaStatus::NsaCertified : NsaStatus::NotCertified;
    cert.diagnostics = {{"gamma1", gamma1}, {"gamma2", gamma2}, {"nu1", nu1},
                        {"nu2", nu2},       {"link_ratio", link}};
    return cert;
}

PidReport counterexample_pid_check(const TrinomialTopModel& m) {
    const auto& p = m.weights();
    const double nu1 = p[0] / p[3];
    const double nu2 = p[2] / p[4];
    Mat<6> a{};
    Vec<6> b{};
    for (int w = 1; w <= 6; ++w) {
        const auto j = static_cast<std::size_t>(w - 1);
        a[0][j] = m.dS1(w);
        a[w <= 3 ? 1 : 2][j] = m.dS2(w);
        a[3][j] = 1.0;
    }
    b[3] = 1.0;
    a[4][0] = 1.0;
    a[4][3] = -nu1;
    a[5][2] = 1.0;
    a[5][4] = -nu2;

    const auto x = solve(a, b);
    if (!x) throw NoSolution("martingale and density constraints are not uniquely solvable");

    PidReport report;
    report.is_valid_emm = true;
    for (std::size_t i = 0; i < 6; ++i) {
        double v = (*x)[i];
        if (v < -1e-12) throw NoSolution("no nonnegative weights satisfy the constraints");
        if (std::abs(v) <= 1e-12) v = 0.0;
        report.candidate[i] = v;
        if (!(v > kTolerance)) report.is_valid_emm = false;
    }
    return report;
}

// ---------------------------------------------------------------------------

Matrix4 trend_system_matrix(const TrendLattice& m) {
    const double q = m.q();
    const Vec<4> middle = {q * m.dS1(2) + m.dS1(3), q * m.dS2(2), m.dS2(3), 0.0};
    if (m.orientation() == Orientation::PositiveDrift) {
        return {{{m.dS1(1), m.dS2(1), 0.0, m.dS3(1)},
                 {m.dS1(4), 0.0, m.dS2(4), 0.0},
                 middle,
                 {m.dS1(5), m.dS2(5), 0.0, m.dS3(5)}}};
    }
    return {{{m.dS1(4), 0.0, m.dS2(4), m.dS3(4)},
             {m.dS1(1), m.dS2(1), 0.0, 0.0},
             middle,
             {m.dS1(5), 0.0, m.dS2(5), m.dS3(5)}}};
}

Vec<3> trend_gamma(const TrendLattice& m) {
    const double q = m.q();
    const double d = sa_denominator(m, q);
    if (is_degenerate(d, trend_scale(m), 3)) throw DegenerateModel("singular constraint matrix");
    if (m.orientation() == Orientation::PositiveDrift) {
        return {q * m.dS2(2) * m.dS2(4) / d,
                (m.dS1(4) * m.dS2(3) - (q * m.dS1(2) + m.dS1(3)) * m.dS2(4)) / d,
                -q * m.dS2(2) * m.dS1(4) / d};
    }
    return {m.dS2(1) * m.dS2(3) / d, -m.dS1(1) * m.dS2(3) / d,
            (-m.dS2(1) * (q * m.dS1(2) + m.dS1(3)) + q * m.dS1(1) * m.dS2(2)) / d};
}

namespace {

StrategyVector extend(const TrendLattice& m, const StrategyVector& base, const Vec<3>& gamma,
                      double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    const int t = m.trend_path();
    const double spread = m.dS3(t) - m.dS3(m.reversal_path());
    if (spread == 0.0) throw DegenerateModel("third-period increments coincide");
    const double psi3 = (1.0 - alpha) / spread;
    const double shift = m.dS3(t) * psi3;
    return {base.phi1 - shift * gamma[0], base.phi2_up - shift * gamma[1],
            base.phi2_down - shift * gamma[2], psi3};
}

}  // namespace

StrategyVector extend_with_trend(const TrendLattice& m, const StrategyVector& base, double alpha) {
    return extend(m, base, trend_gamma(m), alpha);
}

StrategyVector trend_strategy(const TrendLattice& m, double alpha) {
    return extend_with_trend(m, solve_binomial_sa(m.embedded_binomial()), alpha);
}

Matrix4 gfin_system_matrix(const TrendLattice& m) {
    const double r = m.q();
    if (m.orientation() == Orientation::PositiveDrift) {
        return {{{m.dS1(1), m.dS2(1), 0.0, m.dS3(1)},
                 {m.dS1(3) + r * m.dS1(1), r * m.dS2(2), m.dS2(3), 0.0},
                 {m.dS1(3), 0.0, m.dS2(4), 0.0},
                 {m.dS1(1), m.dS2(1), 0.0, m.dS3(5)}}};
    }
    return {{{m.dS1(1), m.dS2(1), 0.0, 0.0},
             {m.dS1(3) + r * m.dS1(2), r * m.dS2(2), m.dS2(3), 0.0},
             {m.dS1(4), 0.0, m.dS2(4), m.dS3(4)},
             {m.dS1(5), 0.0, m.dS2(5), m.dS3(5)}}};
}

namespace {

double gfin_denominator(const TrendLattice& m) {
    const double r = m.q();
    const double d = (r * m.dS1(1) * m.dS2(2) - (m.dS1(3) + r * m.dS1(2)) * m.dS2(1)) * m.dS2(4) +
                     m.dS1(3) * m.dS2(1) * m.dS2(3);
    if (is_degenerate(d, trend_scale(m), 3)) throw DegenerateModel("singular constraint matrix");
    return d;
}

void check_gfin_ordering(const TrendLattice& m) {
    const auto& p = m.prices();
    if (m.orientation() == Orientation::PositiveDrift) {
        if (p.trend_down > p.s0)
            throw InvalidModel("final-value strategy requires the reversal price at or below s0");
    } else if (p.trend_up < p.s0) {
        throw InvalidModel("final-value strategy requires the reversal price at or above s0");
    }
}

}  // namespace

StrategyVector gfin_base(const TrendLattice& m) {
    if (m.orientation() == Orientation::NegativeDrift) return solve_binomial_sa(m.embedded_binomial());
    const double r = m.q();
    if (std::abs(r - tilde_q(m.embedded_binomial())) <= kTolerance)
        throw NoSaExists("weight ratio equals the critical ratio");
    const double d = gfin_denominator(m);
    const double xi1 = (r * m.dS2(2) - m.dS2(1)) * m.dS2(4) + m.dS2(1) * m.dS2(3);
    const double xi2 = (m.dS1(3) - m.dS1(1)) * m.dS2(3) +
                       (m.dS1(1) - m.dS1(3) - r * m.dS1(1)) * m.dS2(4);
    const double xi3 = r * m.dS1(1) * (m.dS2(2) - m.dS2(1)) - r * m.dS2(2) * m.dS1(3);
    return {xi1 / d, xi2 / d, xi3 / d, std::nullopt};
}

Vec<3> gfin_gamma(const TrendLattice& m) {
    const double r = m.q();
    const double d = gfin_denominator(m);
    if (m.orientation() == Orientation::PositiveDrift) {
        return {r * m.dS2(2) * m.dS2(4) / d,
                (m.dS1(3) * m.dS2(3) - (r * m.dS1(1) + m.dS1(3)) * m.dS2(4)) / d,
                -r * m.dS2(2) * m.dS1(3) / d};
    }
    return {m.dS2(1) * m.dS2(3) / d, -m.dS1(1) * m.dS2(3) / d,
            (-m.dS2(1) * (r * m.dS1(2) + m.dS1(3)) + r * m.dS1(1) * m.dS2(2)) / d};
}

StrategyVector extend_gfin(const TrendLattice& m, const StrategyVector& base, double alpha) {
    check_gfin_ordering(m);
    return extend(m, base, gfin_gamma(m), alpha);
}

StrategyVector gfin_strategy(const TrendLattice& m, double alpha) {
    check_gfin_ordering(m);
    return extend_gfin(m, gfin_base(m), alpha);
}

Interval gfin_psi_bounds(const TrendLattice& m, const StrategyVector& base) {
    const bool positive = m.orientation() == Orientation::PositiveDrift;
    const int t = m.trend_path();
    const double up = positive ? m.dS3(t) : m.dS3(m.reversal_path());
    const double down = positive ? m.dS3(m.reversal_path()) : m.dS3(t);
    if (!(up > 0.0 && down < 0.0))
        throw DegenerateModel("third-period increments must straddle zero");
    const double b = base.phi1 * m.dS1(t) + (positive ? base.phi2_up : base.phi2_down) * m.dS2(t);
    if (b < -kTolerance) throw InvalidBase("two-period payoff on the trend path is negative");
    const double bb = std::max(b, 0.0);
    return {-bb / up, -bb / down};
}

}  // namespace gstatarb
