// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace bellcheck;

namespace {

// Pinned tolerances and limits.
constexpr double kIdentityTol = 1e-12;
constexpr double kCascadeSingleTarget = 0.7436, kCascadeSingleTol = 1e-3;
constexpr double kCascadeBothTarget = 1.4871, kCascadeBothTol = 2e-3;
constexpr double kThresholdTarget = 0.828427, kThresholdTol = 1e-6;
constexpr double kInverseTol = 1e-12;
constexpr double kBiLowTarget = 2.2021e-4, kBiLowTol = 1e-8;
constexpr double kFcReducedTarget = 2.2021, kFcReducedTol = 1e-4;
constexpr double kChMarginFloor = -1e-10;
constexpr int kRandomModels = 10000;
constexpr int kGridInstances = 1000;
constexpr double kBisectionTol = 1e-6;
constexpr double kGenuineSlack = 1e-8;
constexpr double kIndependenceTol = 1e-12;
constexpr double kSStarTarget = 2.6870;
constexpr double kSigmas = 3.0;
constexpr std::uint64_t kSeed = 20240611;
constexpr double kLmeasTarget = 2.99792e4;
constexpr double kLminTarget = 1.84e-2, kLminRelTol = 0.01;

struct Check {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Check canonical_identity() {
    const auto phi = optimal_angles().angles.as_array();
    double worst = 0;
    bool boundary_zero = false;
    for (double v : {0.0, 0.5, std::sqrt(2.0) / 2, 0.85, 1.0}) {
        double e[4];
        for (int k = 0; k < 4; ++k) e[k] = v * std::cos(2 * phi[k]);
        const auto r = s_statistic(e[0], e[1], e[2], e[3], true);
        worst = std::max(worst, std::abs(r.lhs - 2 * std::sqrt(2.0) * v));
        if (v == std::sqrt(2.0) / 2) boundary_zero = r.margin == 0.0 && !r.violated;
    }
    return {worst <= kIdentityTol && boundary_zero,
            fmt("max |S* - 2 sqrt2 V| = %.2e, margin at V = sqrt2/2 exactly zero: ", worst) +
                (boundary_zero ? "yes" : "no")};
}

Check cascade_bound() {
    const auto single = cascade_bi_maximum(1.0, false);
    const auto both = cascade_bi_maximum(1.0, true);
    const bool ok = std::abs(single.max_lhs - kCascadeSingleTarget) <= kCascadeSingleTol &&
                    std::abs(both.max_lhs - kCascadeBothTarget) <= kCascadeBothTol && single.max_lhs < 2 &&
                    both.max_lhs < 2;
    return {ok, fmt("single = %.6f, both = %.6f, theta* = %.6f rad", single.max_lhs, both.max_lhs,
                    single.theta_star)};
}

Check efficiency_threshold() {
    const double z = bi1_min_efficiency(1.0);
    double worst = 0;
    const double lo = std::sqrt(2.0) / 2;
    for (int i = 1; i <= 100; ++i) {
        const double v = lo + (1 - lo) * i / 100;
        worst = std::max(worst, std::abs(bi_margin(1, bi1_min_efficiency(v), v).lhs - 2));
    }
    return {std::abs(z - kThresholdTarget) <= kThresholdTol && worst <= kInverseTol,
            fmt("zeta_min(1) = %.9f, max inverse error = %.2e", z, worst)};
}

Check freedman_clauser_regime() {
    std::istringstream in("[cascade]\neta = 1e-4\nv = 0.85\nalpha = 1\n");
    const auto j = predict(Config::parse(in));
    const auto& c = j.at("cascade");
    const double bi = c.at("bi").at("lhs").get<double>();
    const double fc = c.at("fc_reduced_lhs").get<double>();
    const bool ok = std::abs(bi - kBiLowTarget) <= kBiLowTol && c.at("bi").at("fulfilled").get<bool>() &&
                    std::abs(fc - kFcReducedTarget) <= kFcReducedTol && fc > 2 &&
                    c.at("fc").at("violated").get<bool>() && !c.at("fc").at("genuine").get<bool>() &&
                    !c.at("ch").at("violated").get<bool>() && c.at("ch").at("genuine").get<bool>() &&
                    2.0 / bi > 5e3;
    return {ok, fmt("BI lhs = %.4e (fulfilled, genuine CH), FC reduced = %.4f (violated, auxiliary)", bi, fc)};
}

Check genuine_soundness() {
    std::mt19937_64 rng(kSeed);
    double worst = 1;
    int infeasible = 0;
    for (int i = 0; i < kRandomModels; ++i) {
        const auto ps = derive_probability_set(testsupport::random_model(rng), "A", "C", "B", "D");
        worst = std::min(worst, ch_report(ps).margin);
        infeasible += !is_feasible(joint_feasibility(ps));
    }
    return {worst >= kChMarginFloor && infeasible == 0,
            std::to_string(kRandomModels) + fmt(" models, min CH margin = %.3e, infeasible = ", worst) +
                std::to_string(infeasible)};
}

Check fine_equivalence() {
    std::mt19937_64 rng(kSeed + 1);
    int disagreements = 0, infeasible = 0;
    for (int i = 0; i < kGridInstances; ++i) {
        const auto ps = testsupport::random_grid_set(rng);
        const bool lp = is_feasible(joint_feasibility(ps));
        disagreements += lp != testsupport::fine_feasible(ps);
        infeasible += !lp;
    }
    return {disagreements == 0, std::to_string(kGridInstances) + " instances (" + std::to_string(infeasible) +
                                    " infeasible), disagreements = " + std::to_string(disagreements)};
}

Check loophole_optimizer() {
    const double grid[] = {0.1, 0.5, 0.7, 0.75, 0.8, 0.82, 0.85, 0.9, 0.95, 1.0};
    bool monotone = true, sound = true;
    double previous = 1e9, at_one = 0, at_08 = 0;
    for (double eta : grid) {
        const auto r = maximize_s_star(eta);
        monotone = monotone && r.s_star_max <= previous + kBisectionTol;
        previous = r.s_star_max;
        sound = sound && r.genuine_s <= 2 + kGenuineSlack &&
                r.statistics.parameter_independence_defect() <= kIndependenceTol;
        if (eta == 1.0) at_one = r.s_star_max;
        if (eta == 0.8) at_08 = r.s_star_max;
    }
    return {std::abs(at_one - 2) <= kBisectionTol && at_08 > 2 && monotone && sound,
            fmt("S*max(1) = %.7f, S*max(0.8) = %.6f, ", at_one, at_08) + "monotone: " + (monotone ? "yes" : "no") +
                ", genuine_s and parameter independence: " + (sound ? "ok" : "FAILED")};
}

Check end_to_end() {
    std::istringstream in("[pdc]\nv = 0.95\neta = 1.0\nr0 = 1e5\n[simulate]\npairs = 1000000\n");
    const Config cfg = Config::parse(in);
    auto run = [&] {
        std::ostringstream csv;
        write_csv(simulate(cfg, kSeed), csv);
        std::istringstream back(csv.str());
        Provenance p{"simulated.csv", sha256_hex(csv.str()), {}, std::nullopt, ""};
        return run_analysis(parse_counts(back), AnalysisSettings::from_config(cfg), p);
    };
    const auto r = run();
    const std::string j1 = emit_report(r, ReportFormat::json), j2 = emit_report(run(), ReportFormat::json);
    const bool flagged = emit_report(r, ReportFormat::text).find("not a genuine Bell inequality") != std::string::npos;
    const double z = std::abs(r.s_star - kSStarTarget) / r.s_err;
    return {z <= kSigmas && flagged && j1 == j2,
            fmt("S* = %.5f +/- %.5f (%.2f sigma from target)", r.s_star, r.s_err, z) +
                ", auxiliary flag: " + (flagged ? "yes" : "no") + ", byte-identical: " + (j1 == j2 ? "yes" : "no")};
}

Check kinematics() {
    const auto s = spacelike_constraints({3.818e-26, 3000.0, 1.0, 1e-4});
    const bool exact = *s.l_meas == kSpeedOfLight * 1e-4;
    const bool ok = exact && std::abs(*s.l_meas - kLmeasTarget) < 1.0 &&
                    std::abs(s.l_min - kLminTarget) <= kLminRelTol * kLminTarget;
    return {ok, fmt("l_meas = %.4f m, l_min = %.5e m, dt_arrival(1 m) = %.3e s", *s.l_meas, s.l_min, *s.dt_arrival)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Check()> run;
    };
    const Criterion criteria[] = {
        {"canonical identity S* = 2 sqrt2 V", 1, canonical_identity},
        {"cascade experiments stay below the local bound", 1, cascade_bound},
        {"efficiency threshold and inverse consistency", 1, efficiency_threshold},
        {"low-efficiency regime: CH fulfilled, no-enhancement form violated", 1, freedman_clauser_regime},
        {"genuine-inequality soundness on random local models", 60, genuine_soundness},
        {"LP feasibility agrees with the Fine criterion", 60, fine_equivalence},
        {"detection-loophole optimizer", 120, loophole_optimizer},
        {"end-to-end simulate/analyze pipeline", 30, end_to_end},
        {"kinematic spacelike-separation constraints", 1, kinematics},
    };
    int failed = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Check o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs <= c.budget_s;
        failed += !pass;
        std::printf("criterion %d: %s - %s (%s; %.3f s of %.0f s budget)\n", index, pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs, c.budget_s);
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed;
}
