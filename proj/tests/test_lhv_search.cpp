#include <gtest/gtest.h>

#include "support.hpp"

using namespace bellcheck;

namespace {

const std::vector<double>& eta_grid() {
    static const std::vector<double> g{0.1, 0.3, 0.5, 0.6, 0.7, 0.75, 0.78, 0.8, 0.82, 0.8284, 0.85, 0.9, 0.95, 1.0};
    return g;
}

// Independent oracle: the Charnes-Cooper transform of the equal-denominator
// problem is a single LP. With y = w / D and t = 1 / D:
//   max sum_k sign_k N_k(y)  s.t.  sum y = t, detection_side(y) = eta t,
//   D_k(y) = 1 for every pair, y, t >= 0.
double charnes_cooper_s_star(double eta) {
    const auto s1 = enumerate_local_strategies(2, full_alphabet(), Side::one);
    const auto s2 = enumerate_local_strategies(2, full_alphabet(), Side::two);
    const std::size_t n = s1.size() * s2.size();
    lp::Problem p(n + 1);
    std::vector<double> norm(n + 1, 1.0);
    norm[n] = -1.0;
    p.add_equality(norm, 0.0);
    for (std::size_t x = 0; x < 2; ++x) {
        std::vector<double> d1(n + 1, 0.0), d2(n + 1, 0.0);
        d1[n] = d2[n] = -eta;
        for (std::size_t i = 0; i < s1.size(); ++i)
            for (std::size_t j = 0; j < s2.size(); ++j) {
                d1[i * s2.size() + j] = s1[i].outcomes[x] != Outcome::undetected;
                d2[i * s2.size() + j] = s2[j].outcomes[x] != Outcome::undetected;
            }
        p.add_equality(d1, 0.0);
        p.add_equality(d2, 0.0);
    }
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            std::vector<double> den(n + 1, 0.0);
            for (std::size_t i = 0; i < s1.size(); ++i)
                for (std::size_t j = 0; j < s2.size(); ++j) {
                    const int a = outcome_value(s1[i].outcomes[x]), b = outcome_value(s2[j].outcomes[y]);
                    den[i * s2.size() + j] = (a != 0 && b != 0);
                    p.objective[i * s2.size() + j] += (x == 1 && y == 1 ? -1 : 1) * a * b;
                }
            p.add_equality(den, 1.0);
        }
    const auto sol = lp::solve(p);
    EXPECT_EQ(sol.status, lp::Status::optimal);
    return sol.objective;
}

}  // namespace

TEST(EnumerateStrategies, Counts) {
    EXPECT_EQ(enumerate_local_strategies(2, full_alphabet()).size(), 9u);
    EXPECT_EQ(enumerate_local_strategies(2, {Outcome::plus, Outcome::minus}).size(), 4u);
    EXPECT_EQ(enumerate_local_strategies(3, full_alphabet()).size(), 27u);
    const auto s1 = enumerate_local_strategies(2, full_alphabet(), Side::one);
    const auto s2 = enumerate_local_strategies(2, full_alphabet(), Side::two);
    EXPECT_EQ(s1.size() * s2.size(), 81u);
}

TEST(EnumerateStrategies, CanonicalOrder) {
    const auto s = enumerate_local_strategies(2, {Outcome::undetected, Outcome::minus, Outcome::plus});
    std::vector<std::string> labels;
    for (const auto& x : s) labels.push_back(x.label());
    EXPECT_EQ(labels, (std::vector<std::string>{"++", "+-", "+u", "-+", "--", "-u", "u+", "u-", "uu"}));
    EXPECT_THROW(enumerate_local_strategies(0, full_alphabet()), std::invalid_argument);
}

TEST(MixtureStatistics, PointMassOnAlwaysPlus) {
    const DeterministicStrategy plus1{Side::one, {Outcome::plus, Outcome::plus}};
    const DeterministicStrategy plus2{Side::two, {Outcome::plus, Outcome::plus}};
    const auto st = mixture_statistics(StrategyMixture({plus1}, {plus2}, {1.0}));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) EXPECT_EQ(st.counts(x, y).ppp(), 1.0);
}

// Oracle: count strategy pairs by hand. A side-1 strategy answers + at a given
// setting in 3 of its 9 forms, so (+,+) at any pair covers 3 * 3 = 9 of 81.
TEST(MixtureStatistics, UniformMixtureCounting) {
    const auto s1 = enumerate_local_strategies(2, full_alphabet(), Side::one);
    const auto s2 = enumerate_local_strategies(2, full_alphabet(), Side::two);
    const auto st = mixture_statistics(StrategyMixture::uniform(s1, s2));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            int counted = 0;
            for (const auto& a : s1)
                for (const auto& b : s2) counted += a.outcomes[x] == Outcome::plus && b.outcomes[y] == Outcome::minus;
            const auto c = st.counts(x, y);
            for (double p : {c.ppp(), c.ppm(), c.pmp(), c.pmm()}) EXPECT_NEAR(p, counted / 81.0, 1e-15);
            EXPECT_NEAR(c.ppp(), 1.0 / 9, 1e-15);
        }
}

TEST(MixtureStatistics, ParameterIndependenceOnRandomMixtures) {
    std::mt19937_64 rng(21);
    std::exponential_distribution<double> ex;
    const auto s1 = enumerate_local_strategies(2, full_alphabet(), Side::one);
    const auto s2 = enumerate_local_strategies(2, full_alphabet(), Side::two);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> w(81);
        double sum = 0;
        for (auto& x : w) sum += (x = ex(rng));
        for (auto& x : w) x /= sum;
        const auto st = mixture_statistics(StrategyMixture(s1, s2, w));
        EXPECT_LE(st.parameter_independence_defect(), 1e-15);
        EXPECT_LE(genuine_s_of(st), 2 + 1e-12);
    }
}

TEST(StrategyMixtureType, RejectsBadWeights) {
    const auto s = enumerate_local_strategies(1, {Outcome::plus}, Side::one);
    const auto t = enumerate_local_strategies(1, {Outcome::plus}, Side::two);
    EXPECT_THROW(StrategyMixture(s, t, {0.9}), std::invalid_argument);
    EXPECT_THROW(StrategyMixture(s, t, {1.0, 0.0}), std::invalid_argument);
    EXPECT_NO_THROW(StrategyMixture(s, t, {1.0}));
}

TEST(MaximizeSStar, FullEfficiencyIsLocalBound) {
    const auto r = maximize_s_star(1.0);
    EXPECT_NEAR(r.s_star_max, 2.0, 1e-6);
    EXPECT_NEAR(r.genuine_s, r.s_star_max, 1e-9);
}

TEST(MaximizeSStar, BelowThresholdExceedsTwo) {
    const auto r = maximize_s_star(0.8);
    EXPECT_GT(r.s_star_max, 2.0 + 1e-3);
    EXPECT_LE(r.genuine_s, 2 + 1e-8);
}

TEST(MaximizeSStar, SmallEfficiencyReachesAlgebraicMaximum) {
    EXPECT_NEAR(maximize_s_star(0.1).s_star_max, 4.0, 1e-6);
}

TEST(MaximizeSStar, MatchesCharnesCooperOracle) {
    for (double eta : eta_grid()) {
        const auto r = maximize_s_star(eta);
        const double oracle = charnes_cooper_s_star(eta);
        EXPECT_NEAR(r.s_star_max, oracle, 2e-6) << "eta " << eta;
        // The equal-denominator optimum has the closed form min(4, 2 / (2 eta - 1)).
        const double closed = eta <= 0.75 ? 4.0 : 2.0 / (2 * eta - 1);
        EXPECT_NEAR(oracle, closed, 1e-9) << "eta " << eta;
    }
}

TEST(MaximizeSStar, OutputInvariants) {
    double previous = 1e9;
    for (double eta : eta_grid()) {
        const auto r = maximize_s_star(eta);
        EXPECT_LE(r.s_star_max, previous + 1e-9) << "eta " << eta;
        previous = r.s_star_max;
        EXPECT_LE(r.genuine_s, 2 + 1e-8);
        EXPECT_LE(r.statistics.parameter_independence_defect(), 1e-12);
        for (std::size_t x = 0; x < 2; ++x) {
            EXPECT_NEAR(r.statistics.detection1(x), eta, 1e-9);
            EXPECT_NEAR(r.statistics.detection2(x), eta, 1e-9);
        }
        for (double c : r.coincidences) EXPECT_NEAR(c, r.coincidences[0], 1e-9);
        EXPECT_FALSE(ch_report(single_channel_set(r.statistics)).violated);
        EXPECT_TRUE(is_feasible(joint_feasibility(single_channel_set(r.statistics))));
    }
}

TEST(MaximizeSStar, RejectsOutOfRangeEfficiency) {
    EXPECT_THROW(maximize_s_star(0.0), std::invalid_argument);
    EXPECT_THROW(maximize_s_star(1.1), std::invalid_argument);
}

TEST(MixtureToModel, ReproducesStatistics) {
    const auto r = maximize_s_star(0.8);
    const auto m = mixture_to_model(r.mixture);
    EXPECT_TRUE(m.valid());
    const auto from_model = derive_probability_set(m, "A", "C", "B", "D").as_array();
    const auto direct = single_channel_set(r.statistics).as_array();
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(from_model[i], direct[i], 1e-12);
    EXPECT_THROW(mixture_to_model(r.mixture, {"A"}, {"B", "D"}), std::invalid_argument);
}

TEST(SearchResultJson, Fields) {
    const auto j = to_json(maximize_s_star(0.9));
    for (const char* key : {"s_star_max", "genuine_s", "eta", "weights"}) EXPECT_TRUE(j.contains(key));
    EXPECT_EQ(j.at("weights").size(), 81u);
}
