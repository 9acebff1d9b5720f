#include <gtest/gtest.h>

#include <random>

#include "bellcheck/simplex.hpp"

using namespace bellcheck::lp;

TEST(Simplex, SmallMaximization) {
    // max 3x + 2y  s.t.  x + y <= 4, x + 3y <= 6, x <= 3
    Problem p(2);
    p.objective = {3, 2};
    p.add_less_equal({1, 1}, 4);
    p.add_less_equal({1, 3}, 6);
    p.add_less_equal({1, 0}, 3);
    const auto s = solve(p);
    ASSERT_EQ(s.status, Status::optimal);
    EXPECT_NEAR(s.objective, 11.0, 1e-12);
    EXPECT_NEAR(s.x[0], 3.0, 1e-12);
    EXPECT_NEAR(s.x[1], 1.0, 1e-12);
}

TEST(Simplex, EqualityAndNegativeRhs) {
    // max -x - y  s.t.  x - y = -1, x + y >= 3 (as -x - y <= -3)
    Problem p(2);
    p.objective = {-1, -1};
    p.add_equality({1, -1}, -1);
    p.add_less_equal({-1, -1}, -3);
    const auto s = solve(p);
    ASSERT_EQ(s.status, Status::optimal);
    EXPECT_NEAR(s.x[0], 1.0, 1e-12);
    EXPECT_NEAR(s.x[1], 2.0, 1e-12);
}

TEST(Simplex, DetectsInfeasible) {
    Problem p(2);
    p.add_equality({1, 1}, 1);
    p.add_less_equal({1, 1}, 0.5);
    EXPECT_EQ(solve(p).status, Status::infeasible);
}

TEST(Simplex, DetectsUnbounded) {
    Problem p(2);
    p.objective = {1, 0};
    p.add_less_equal({-1, 1}, 1);
    EXPECT_EQ(solve(p).status, Status::unbounded);
}

TEST(Simplex, RedundantEqualities) {
    Problem p(3);
    p.objective = {1, 2, 3};
    p.add_equality({1, 1, 1}, 1);
    p.add_equality({2, 2, 2}, 2);
    p.add_equality({1, 1, 1}, 1);
    const auto s = solve(p);
    ASSERT_EQ(s.status, Status::optimal);
    EXPECT_NEAR(s.objective, 3.0, 1e-12);
}

// Oracle: on a simplex-constrained problem max c.x over {x >= 0, sum x = 1},
// the optimum is max_i c_i.
TEST(Simplex, RandomSimplexVertexOptimum) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 20;
        Problem p(n);
        p.objective.resize(n);
        double best = -1e300;
        for (auto& c : p.objective) best = std::max(best, c = g(rng));
        p.add_equality(std::vector<double>(n, 1.0), 1.0);
        const auto s = solve(p);
        ASSERT_EQ(s.status, Status::optimal);
        EXPECT_NEAR(s.objective, best, 1e-12);
    }
}

// Degenerate transportation-style problem; checks Bland's rule terminates.
TEST(Simplex, DegenerateProblemTerminates) {
    Problem p(9);
    p.objective = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    for (int i = 0; i < 3; ++i) {
        std::vector<double> row(9, 0.0), col(9, 0.0);
        for (int j = 0; j < 3; ++j) {
            row[3 * i + j] = 1;
            col[3 * j + i] = 1;
        }
        p.add_equality(row, 1.0 / 3);
        p.add_equality(col, 1.0 / 3);
    }
    const auto s = solve(p);
    ASSERT_EQ(s.status, Status::optimal);
    EXPECT_NEAR(s.objective, 1.0, 1e-12);
}
