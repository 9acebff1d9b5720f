#pragma once

// Does a joint distribution over {A, C, B, D} exist that reproduces a
// measured ProbabilitySet? Decided by LP feasibility over the 16 outcome
// weights. p(C) and p(D) are unmeasured and therefore free.
//
// The projection of the 16-outcome simplex onto the six measured
// coordinates has exactly 13 facets: the Clauser-Horne inequality, its
// outcome-relabeled lower form, and 11 bound constraints. Every other
// relabeling of CH mentions p(C) or p(D). Certificates are picked from
// that list.

#include <algorithm>
#include <array>
#include <string>
#include <variant>
#include <vector>

#include "bellcheck/lhv_core.hpp"
#include "bellcheck/probability_set.hpp"
#include "bellcheck/simplex.hpp"

namespace bellcheck {

/// left . x <= right . x + constant, with x = (pA, pB, pAB, pAD, pCB, pCD).
struct LinearInequality {
    enum class Family { clauser_horne, bound };
    std::string name;
    Family family;
    std::array<double, 6> left;
    std::array<double, 6> right;
    double constant;

    double lhs(const ProbabilitySet& ps) const { return dot(left, ps); }
    double rhs(const ProbabilitySet& ps) const { return dot(right, ps) + constant; }
    /// Positive means violated.
    double excess(const ProbabilitySet& ps) const { return lhs(ps) - rhs(ps); }

private:
    static double dot(const std::array<double, 6>& c, const ProbabilitySet& ps) {
        const auto v = ps.as_array();
        double s = 0.0;
        for (std::size_t i = 0; i < 6; ++i) s += c[i] * v[i];
        return s;
    }
};

inline const std::vector<LinearInequality>& measurable_facets() {
    using F = LinearInequality::Family;
    //                   pA pB pAB pAD pCB pCD
    static const std::vector<LinearInequality> facets = {
        {"CH: pAB + pAD + pCB - pCD <= pA + pB", F::clauser_horne, {0, 0, 1, 1, 1, -1}, {1, 1, 0, 0, 0, 0}, 0.0},
        {"CH (outcome-relabeled): pA + pB - pAB - pAD - pCB + pCD <= 1", F::clauser_horne,
         {1, 1, -1, -1, -1, 1}, {}, 1.0},
        {"pAB <= pA", F::bound, {0, 0, 1, 0, 0, 0}, {1, 0, 0, 0, 0, 0}, 0.0},
        {"pAD <= pA", F::bound, {0, 0, 0, 1, 0, 0}, {1, 0, 0, 0, 0, 0}, 0.0},
        {"pAB <= pB", F::bound, {0, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, 0.0},
        {"pCB <= pB", F::bound, {0, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 0, 0}, 0.0},
        {"pAB >= 0", F::bound, {0, 0, -1, 0, 0, 0}, {}, 0.0},
        {"pAD >= 0", F::bound, {0, 0, 0, -1, 0, 0}, {}, 0.0},
        {"pCB >= 0", F::bound, {0, 0, 0, 0, -1, 0}, {}, 0.0},
        {"pCD >= 0", F::bound, {0, 0, 0, 0, 0, -1}, {}, 0.0},
        {"pA + pB - pAB <= 1", F::bound, {1, 1, -1, 0, 0, 0}, {}, 1.0},
        {"pA - pAD + pCD <= 1", F::bound, {1, 0, 0, -1, 0, 1}, {}, 1.0},
        {"pB - pCB + pCD <= 1", F::bound, {0, 1, 0, 0, -1, 1}, {}, 1.0},
    };
    return facets;
}

struct Feasible {
    FourOutcomeJoint witness;
};

struct Infeasible {
    LinearInequality certificate;
    double lhs;
    double rhs;
};

using FeasibilityResult = std::variant<Feasible, Infeasible>;

inline bool is_feasible(const FeasibilityResult& r) { return std::holds_alternative<Feasible>(r); }

inline FeasibilityResult joint_feasibility(const ProbabilitySet& ps, double tolerance = kDataTolerance) {
    using S = FourOutcomeJoint;
    lp::Problem prob(16);
    auto constraint = [&](auto&& predicate, double rhs) {
        std::vector<double> row(16, 0.0);
        for (std::size_t i = 0; i < 16; ++i) row[i] = predicate(i) ? 1.0 : 0.0;
        prob.add_equality(std::move(row), rhs);
    };
    constraint([](std::size_t) { return true; }, 1.0);
    constraint([](std::size_t i) { return S::bit(i, S::A); }, ps.pA());
    constraint([](std::size_t i) { return S::bit(i, S::B); }, ps.pB());
    constraint([](std::size_t i) { return S::bit(i, S::A) && S::bit(i, S::B); }, ps.pAB());
    constraint([](std::size_t i) { return S::bit(i, S::A) && S::bit(i, S::D); }, ps.pAD());
    constraint([](std::size_t i) { return S::bit(i, S::C) && S::bit(i, S::B); }, ps.pCB());
    constraint([](std::size_t i) { return S::bit(i, S::C) && S::bit(i, S::D); }, ps.pCD());

    lp::Options opt;
    opt.feasibility_tolerance = tolerance;
    const lp::Solution sol = lp::solve(prob, opt);
    if (sol.status != lp::Status::infeasible) {
        std::array<double, 16> q{};
        for (std::size_t i = 0; i < 16; ++i) q[i] = std::max(0.0, sol.x[i]);
        return Feasible{FourOutcomeJoint({"A", "C", "B", "D"}, q)};
    }

    // Prefer a violated CH-family facet; fall back to the worst bound.
    const auto& facets = measurable_facets();
    const LinearInequality* best = nullptr;
    for (auto family : {LinearInequality::Family::clauser_horne, LinearInequality::Family::bound}) {
        for (const auto& f : facets) {
            if (f.family != family) continue;
            if (!best || f.excess(ps) > best->excess(ps)) best = &f;
        }
        if (best && best->excess(ps) > tolerance) break;
    }
    return Infeasible{*best, best->lhs(ps), best->rhs(ps)};
}

}  // namespace bellcheck
