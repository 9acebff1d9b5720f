#pragma once

// Search over local-realistic models for the largest renormalized CHSH value
// S* reachable at a given detection efficiency.
//
// Local models are mixtures of pairs of deterministic local strategies; each
// strategy fixes, per setting, one outcome out of {+, -, undetected}. These
// are the extreme points of the factorizable set, so optimizing over mixture
// weights is exact. S* is a ratio of linear functions of the weights; with
// equal coincidence totals D across the four setting pairs it becomes
// N(w) / D(w), which is maximized by bisection on t with LP subproblems
// max N(w) - t D(w).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcheck/inequalities.hpp"
#include "bellcheck/lhv_core.hpp"
#include "bellcheck/simplex.hpp"

namespace bellcheck {

enum class Outcome { plus = 0, minus = 1, undetected = 2 };

inline char to_char(Outcome o) {
    switch (o) {
        case Outcome::plus: return '+';
        case Outcome::minus: return '-';
        case Outcome::undetected: return 'u';
    }
    return '?';
}

/// +1, -1, or 0 for an undetected particle.
inline int outcome_value(Outcome o) { return o == Outcome::plus ? 1 : o == Outcome::minus ? -1 : 0; }

struct DeterministicStrategy {
    Side side;
    std::vector<Outcome> outcomes;  // one per setting

    std::string label() const {
        std::string s;
        for (auto o : outcomes) s += to_char(o);
        return s;
    }
    friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

inline const std::vector<Outcome>& full_alphabet() {
    static const std::vector<Outcome> a{Outcome::plus, Outcome::minus, Outcome::undetected};
    return a;
}

/// All |alphabet|^n_settings strategies, lexicographic with the first setting
/// most significant and outcomes ordered +, -, u.
inline std::vector<DeterministicStrategy> enumerate_local_strategies(std::size_t n_settings,
                                                                     std::vector<Outcome> alphabet,
                                                                     Side side = Side::one) {
    if (n_settings < 1) throw std::invalid_argument("strategies: need at least one setting");
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    if (alphabet.empty()) throw std::invalid_argument("strategies: empty outcome alphabet");

    std::size_t count = 1;
    for (std::size_t i = 0; i < n_settings; ++i) count *= alphabet.size();
    std::vector<DeterministicStrategy> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        DeterministicStrategy s{side, std::vector<Outcome>(n_settings)};
        std::size_t rem = k;
        for (std::size_t i = n_settings; i-- > 0;) {
            s.outcomes[i] = alphabet[rem % alphabet.size()];
            rem /= alphabet.size();
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// Weights over ordered pairs (side-1 strategy i, side-2 strategy j), stored
/// at index i * side2.size() + j.
class StrategyMixture {
public:
    StrategyMixture(std::vector<DeterministicStrategy> side1, std::vector<DeterministicStrategy> side2,
                    std::vector<double> weights)
        : side1_(std::move(side1)), side2_(std::move(side2)), weights_(std::move(weights)) {
        if (side1_.empty() || side2_.empty()) throw std::invalid_argument("mixture: empty strategy list");
        if (weights_.size() != side1_.size() * side2_.size())
            throw std::invalid_argument("mixture: weight count must equal the number of strategy pairs");
        const std::size_t n1 = side1_.front().outcomes.size(), n2 = side2_.front().outcomes.size();
        for (const auto& s : side1_)
            if (s.outcomes.size() != n1) throw std::invalid_argument("mixture: ragged side-1 strategies");
        for (const auto& s : side2_)
            if (s.outcomes.size() != n2) throw std::invalid_argument("mixture: ragged side-2 strategies");
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0)) throw std::invalid_argument("mixture: negative weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-10) throw std::invalid_argument("mixture: weights do not sum to 1");
    }

    /// Equal weight on every pair.
    static StrategyMixture uniform(std::vector<DeterministicStrategy> side1, std::vector<DeterministicStrategy> side2) {
        const std::size_t n = side1.size() * side2.size();
        return {std::move(side1), std::move(side2), std::vector<double>(n, 1.0 / static_cast<double>(n))};
    }

    const std::vector<DeterministicStrategy>& side1() const { return side1_; }
    const std::vector<DeterministicStrategy>& side2() const { return side2_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t i, std::size_t j) const { return weights_[i * side2_.size() + j]; }
    std::size_t settings1() const { return side1_.front().outcomes.size(); }
    std::size_t settings2() const { return side2_.front().outcomes.size(); }

private:
    std::vector<DeterministicStrategy> side1_;
    std::vector<DeterministicStrategy> side2_;
    std::vector<double> weights_;
};

/// 3x3 outcome table p(o1, o2) for one setting pair, indexed by Outcome.
using OutcomeTable = std::array<std::array<double, 3>, 3>;

inline TwoChannelCounts detected_block(const OutcomeTable& t) {
    return {t[0][0], t[0][1], t[1][0], t[1][1], false};
}

struct MixtureStatistics {
    std::size_t settings1 = 0, settings2 = 0;
    /// tables[x * settings2 + y]
    std::vector<OutcomeTable> tables;
    /// Probability of each outcome per setting, computed directly from the weights.
    std::vector<std::array<double, 3>> marginal1, marginal2;

    const OutcomeTable& table(std::size_t x, std::size_t y) const { return tables.at(x * settings2 + y); }
    TwoChannelCounts counts(std::size_t x, std::size_t y) const { return detected_block(table(x, y)); }
    double detection1(std::size_t x) const { return marginal1.at(x)[0] + marginal1.at(x)[1]; }
    double detection2(std::size_t y) const { return marginal2.at(y)[0] + marginal2.at(y)[1]; }
    /// Coincidence total p++ + p+- + p-+ + p-- at (x, y).
    double coincidence(std::size_t x, std::size_t y) const { return counts(x, y).total(); }

    /// Largest deviation between a side's marginal as read off any pair table
    /// and its directly computed marginal.
    double parameter_independence_defect() const {
        double worst = 0.0;
        for (std::size_t x = 0; x < settings1; ++x)
            for (std::size_t y = 0; y < settings2; ++y) {
                const auto& t = table(x, y);
                for (std::size_t o = 0; o < 3; ++o) {
                    worst = std::max(worst, std::abs(t[o][0] + t[o][1] + t[o][2] - marginal1[x][o]));
                    worst = std::max(worst, std::abs(t[0][o] + t[1][o] + t[2][o] - marginal2[y][o]));
                }
            }
        return worst;
    }
};

inline MixtureStatistics mixture_statistics(const StrategyMixture& m) {
    MixtureStatistics st;
    st.settings1 = m.settings1();
    st.settings2 = m.settings2();
    st.tables.assign(st.settings1 * st.settings2, OutcomeTable{});
    st.marginal1.assign(st.settings1, {0.0, 0.0, 0.0});
    st.marginal2.assign(st.settings2, {0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < m.side1().size(); ++i) {
        const auto& s1 = m.side1()[i].outcomes;
        for (std::size_t j = 0; j < m.side2().size(); ++j) {
            const double w = m.weight(i, j);
            if (w == 0.0) continue;
            const auto& s2 = m.side2()[j].outcomes;
            for (std::size_t x = 0; x < st.settings1; ++x) {
                st.marginal1[x][static_cast<std::size_t>(s1[x])] += w;
                for (std::size_t y = 0; y < st.settings2; ++y)
                    st.tables[x * st.settings2 + y][static_cast<std::size_t>(s1[x])][static_cast<std::size_t>(s2[y])] += w;
            }
            for (std::size_t y = 0; y < st.settings2; ++y) st.marginal2[y][static_cast<std::size_t>(s2[y])] += w;
        }
    }
    return st;
}

/// Sign of each pair in S = E(A,B) + E(A,D) + E(C,B) - E(C,D), with settings
/// 0 = A, 1 = C on side 1 and 0 = B, 1 = D on side 2.
inline int chsh_sign(std::size_t x, std::size_t y) { return (x == 1 && y == 1) ? -1 : 1; }

/// Renormalized S* of a two-setting statistics block.
inline double s_star_of(const MixtureStatistics& st) {
    double s = 0.0;
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) s += chsh_sign(x, y) * renormalized_correlation(st.counts(x, y));
    return s;
}

/// Un-renormalized S: undetected outcomes contribute 0 to the correlation.
inline double genuine_s_of(const MixtureStatistics& st) {
    double s = 0.0;
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) s += chsh_sign(x, y) * correlation(st.counts(x, y));
    return s;
}

/// Single-channel view: "yes" means a detection in the + channel.
inline ProbabilitySet single_channel_set(const MixtureStatistics& st) {
    return {st.marginal1[0][0],        st.marginal2[0][0],        st.table(0, 0)[0][0],
            st.table(0, 1)[0][0],      st.table(1, 0)[0][0],      st.table(1, 1)[0][0],
            kDataTolerance};
}

/// One hidden-variable cell per strategy pair; the response is 1 when the
/// strategy answers + for that setting.
inline FactorizableModel mixture_to_model(const StrategyMixture& m,
                                          std::vector<std::string> settings1 = {"A", "C"},
                                          std::vector<std::string> settings2 = {"B", "D"}) {
    if (settings1.size() != m.settings1() || settings2.size() != m.settings2())
        throw std::invalid_argument("mixture_to_model: setting label count mismatch");
    std::vector<std::string> cells;
    std::vector<std::vector<double>> t1, t2;
    for (std::size_t i = 0; i < m.side1().size(); ++i)
        for (std::size_t j = 0; j < m.side2().size(); ++j) {
            cells.push_back(m.side1()[i].label() + "|" + m.side2()[j].label());
            std::vector<double> r1, r2;
            for (auto o : m.side1()[i].outcomes) r1.push_back(o == Outcome::plus ? 1.0 : 0.0);
            for (auto o : m.side2()[j].outcomes) r2.push_back(o == Outcome::plus ? 1.0 : 0.0);
            t1.push_back(std::move(r1));
            t2.push_back(std::move(r2));
        }
    return {HiddenVariableSpace(std::move(cells), m.weights()),
            ResponseTable(Side::one, std::move(settings1), std::move(t1)),
            ResponseTable(Side::two, std::move(settings2), std::move(t2))};
}

struct SearchOptions {
    double tolerance = 1e-6;            // bisection width on S*
    double positivity_threshold = 1e-12;  // N - tD must exceed this to accept t
};

struct SearchResult {
    double eta = 0.0;
    double s_star_max = 0.0;
    double genuine_s = 0.0;
    StrategyMixture mixture;
    MixtureStatistics statistics;
    /// Coincidence totals for (A,B), (A,D), (C,B), (C,D).
    std::array<double, 4> coincidences{};
    std::size_t lp_solves = 0;
};

class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline SearchResult maximize_s_star(double eta, const SearchOptions& opt = {}) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("maximize_s_star: eta must be in (0, 1]");

    auto s1 = enumerate_local_strategies(2, full_alphabet(), Side::one);
    auto s2 = enumerate_local_strategies(2, full_alphabet(), Side::two);
    const std::size_t n1 = s1.size(), n2 = s2.size(), n = n1 * n2;

    // Per-variable coefficients of the correlation numerator and the
    // coincidence indicator for each setting pair.
    std::array<std::vector<double>, 4> numer, detect;
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            auto& nu = numer[x * 2 + y];
            auto& de = detect[x * 2 + y];
            nu.assign(n, 0.0);
            de.assign(n, 0.0);
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) {
                    const Outcome a = s1[i].outcomes[x], b = s2[j].outcomes[y];
                    nu[i * n2 + j] = outcome_value(a) * outcome_value(b);
                    de[i * n2 + j] = (a != Outcome::undetected && b != Outcome::undetected) ? 1.0 : 0.0;
                }
        }

    lp::Problem base(n);
    base.add_equality(std::vector<double>(n, 1.0), 1.0);
    for (std::size_t x = 0; x < 2; ++x) {
        std::vector<double> r1(n, 0.0), r2(n, 0.0);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) {
                if (s1[i].outcomes[x] != Outcome::undetected) r1[i * n2 + j] = 1.0;
                if (s2[j].outcomes[x] != Outcome::undetected) r2[i * n2 + j] = 1.0;
            }
        base.add_equality(std::move(r1), eta);
        base.add_equality(std::move(r2), eta);
    }
    for (std::size_t k = 1; k < 4; ++k) {
        std::vector<double> row(n);
        for (std::size_t v = 0; v < n; ++v) row[v] = detect[k][v] - detect[0][v];
        base.add_equality(std::move(row), 0.0);
    }

    std::size_t solves = 0;
    auto attempt = [&](double t) -> std::vector<double> {
        lp::Problem p = base;
        for (std::size_t v = 0; v < n; ++v) {
            double num = 0.0;
            for (std::size_t k = 0; k < 4; ++k) num += chsh_sign(k / 2, k % 2) * numer[k][v];
            p.objective[v] = num - t * detect[0][v];
        }
        ++solves;
        const lp::Solution sol = lp::solve(p);
        if (sol.status == lp::Status::infeasible)
            throw SearchError("maximize_s_star: efficiency constraints infeasible (LP phase one failed)");
        if (sol.status == lp::Status::unbounded) throw SearchError("maximize_s_star: LP unbounded");
        if (sol.objective > opt.positivity_threshold) return sol.x;
        return {};
    };

    double lo = -4.0, hi = 4.0;
    std::vector<double> best = attempt(lo);
    if (best.empty()) throw SearchError("maximize_s_star: no mixture with nonzero coincidences");
    while (hi - lo > opt.tolerance) {
        const double mid = 0.5 * (lo + hi);
        auto x = attempt(mid);
        if (x.empty()) {
            hi = mid;
        } else {
            lo = mid;
            best = std::move(x);
        }
    }

    // Clean LP round-off so the mixture validates.
    double sum = 0.0;
    for (double& w : best) {
        if (w < 0.0) w = 0.0;
        sum += w;
    }
    for (double& w : best) w /= sum;

    StrategyMixture mixture(std::move(s1), std::move(s2), std::move(best));
    MixtureStatistics stats = mixture_statistics(mixture);
    SearchResult r{eta,     s_star_of(stats), genuine_s_of(stats), std::move(mixture), std::move(stats), {},
                   solves};
    for (std::size_t k = 0; k < 4; ++k) r.coincidences[k] = r.statistics.coincidence(k / 2, k % 2);
    return r;
}

}  // namespace bellcheck
