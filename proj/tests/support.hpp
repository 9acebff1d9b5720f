#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bellcheck/bellcheck.hpp"

namespace testsupport {

using namespace bellcheck;

// Random valid model with three settings per side. About a fifth of the
// responses are forced to 0 or 1 so that extreme points get exercised.
inline FactorizableModel random_model(std::mt19937_64& rng, std::size_t max_cells = 8) {
    std::uniform_int_distribution<std::size_t> ncell(1, max_cells);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = ncell(rng);
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) sum += (x = u(rng) + 1e-3);
    for (auto& x : w) x /= sum;
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < n; ++i) cells.push_back("c" + std::to_string(i));
    auto response = [&] {
        const double r = u(rng);
        if (r < 0.1) return 0.0;
        if (r < 0.2) return 1.0;
        return u(rng);
    };
    std::vector<std::vector<double>> t1(n, std::vector<double>(3)), t2(n, std::vector<double>(3));
    for (auto& row : t1)
        for (auto& x : row) x = response();
    for (auto& row : t2)
        for (auto& x : row) x = response();
    return {HiddenVariableSpace(cells, w), ResponseTable(Side::one, {"A", "C", "E"}, t1),
            ResponseTable(Side::two, {"B", "D", "F"}, t2)};
}

// Fine's criterion for the 2x2 scenario with the unmeasured marginals
// x = p(C), y = p(D) left free: a joint distribution exists iff some (x, y)
// in the unit square satisfies all eight CH inequalities and the Frechet
// bounds of the four pairs. The feasible set is a polygon; it is nonempty iff
// one of the pairwise intersections of its boundary lines is feasible.
inline bool fine_feasible(const ProbabilitySet& ps, double tol = 1e-9) {
    struct Row {
        double a, b, c;  // a x + b y <= c
    };
    std::vector<Row> rows;
    const double pA = ps.pA(), pB = ps.pB();
    // pair (X, Y) with marginals expressed as (const, coef_x, coef_y)
    struct Lin {
        double k, x, y;
    };
    const Lin A{pA, 0, 0}, B{pB, 0, 0}, C{0, 1, 0}, D{0, 0, 1};
    auto le = [&](Lin l, double p) { rows.push_back({l.x, l.y, p - l.k}); };  // l <= p
    auto ge = [&](Lin l, double p) { rows.push_back({-l.x, -l.y, l.k - p}); };  // l >= p
    auto sum = [](Lin l, Lin r) { return Lin{l.k + r.k, l.x + r.x, l.y + r.y}; };
    const std::array<std::array<Lin, 2>, 4> pairs{{{A, B}, {A, D}, {C, B}, {C, D}}};
    const std::array<double, 4> p{ps.pAB(), ps.pAD(), ps.pCB(), ps.pCD()};
    for (std::size_t k = 0; k < 4; ++k) {
        le(Lin{-pairs[k][0].k, -pairs[k][0].x, -pairs[k][0].y}, -p[k]);  // p <= X
        le(Lin{-pairs[k][1].k, -pairs[k][1].x, -pairs[k][1].y}, -p[k]);  // p <= Y
        le(sum(pairs[k][0], pairs[k][1]), 1.0 + p[k]);                  // X + Y - 1 <= p
    }
    for (double v : {0.0, 1.0}) {
        rows.push_back({v == 0 ? -1.0 : 1.0, 0, v});
        rows.push_back({0, v == 0 ? -1.0 : 1.0, v});
    }
    // Eight CH inequalities: choose the subtracted pair (X', Y'); with X, Y the
    // other settings, -1 <= pXY + pXY' + pX'Y - pX'Y' - pX - pY <= 0.
    const std::array<Lin, 2> side1{A, C}, side2{B, D};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            double pairs_sum = 0.0;
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y) pairs_sum += (x == i && y == j ? -1.0 : 1.0) * p[2 * x + y];
            const Lin singles = sum(side1[1 - i], side2[1 - j]);
            ge(singles, pairs_sum);         // pairs - singles <= 0
            le(singles, pairs_sum + 1.0);  // pairs - singles >= -1
        }

    auto ok = [&](double x, double y) {
        for (const auto& r : rows)
            if (r.a * x + r.b * y > r.c + tol) return false;
        return true;
    };
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const double det = rows[i].a * rows[j].b - rows[i].b * rows[j].a;
            if (std::abs(det) < 1e-14) continue;
            const double x = (rows[i].c * rows[j].b - rows[i].b * rows[j].c) / det;
            const double y = (rows[i].a * rows[j].c - rows[i].c * rows[j].a) / det;
            if (ok(x, y)) return true;
        }
    return false;
}

// Random 0.1-grid probability set respecting the pair <= marginal bounds.
inline ProbabilitySet random_grid_set(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> g(0, 10);
    auto below = [&](int cap) { return std::uniform_int_distribution<int>(0, cap)(rng); };
    const int a = g(rng), b = g(rng);
    return {a / 10.0, b / 10.0, below(std::min(a, b)) / 10.0, below(a) / 10.0, below(b) / 10.0, g(rng) / 10.0};
}

}  // namespace testsupport
