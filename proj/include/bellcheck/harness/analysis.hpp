#pragma once

// Count dataset -> correlations, CHSH statistics and inequality verdicts.
//
// Error propagation is first order. For E* = (n_same - n_diff) / n, the
// counts are multinomial given the coincidence total n, so
// var(E*) = (1 - E*^2) / n. For the absolute correlation
// E = (n_same - n_diff) / N over N emitted pairs,
// var(E) = (n / N - E^2) / N. S and S* errors add in quadrature.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bellcheck/harness/config.hpp"
#include "bellcheck/harness/count_dataset.hpp"
#include "bellcheck/harness/errors.hpp"
#include "bellcheck/inequalities.hpp"
#include "bellcheck/quantum_experiments.hpp"

namespace bellcheck {

/// Canonical setting labels: A, C on side 1; B, D on side 2.
inline const std::array<std::pair<const char*, const char*>, 4>& canonical_pairs() {
    static const std::array<std::pair<const char*, const char*>, 4> p{
        {{"A", "B"}, {"A", "D"}, {"C", "B"}, {"C", "D"}}};
    return p;
}

struct AnalysisSettings {
    /// Pair production rate (1/s). When set, rows with a duration yield
    /// absolute probabilities over N = r0 * duration emitted pairs.
    std::optional<double> r0;
    /// Polarizer orientations (rad) by setting label.
    std::map<std::string, double> orientation{
        {"A", Orientations{}.a}, {"C", Orientations{}.c}, {"B", Orientations{}.b}, {"D", Orientations{}.d}};

    static AnalysisSettings from_config(const Config& cfg) {
        AnalysisSettings s;
        s.r0 = cfg.get_double("analysis", "r0");
        if (s.r0 && !(*s.r0 > 0.0)) throw InputError("config [analysis] r0 must be positive");
        if (auto sec = cfg.sections().find("analysis"); sec != cfg.sections().end()) {
            for (const auto& [key, value] : sec->second) {
                static const std::string prefix = "orientation_";
                if (key.rfind(prefix, 0) == 0)
                    s.orientation[key.substr(prefix.size())] = *cfg.get_double("analysis", key);
            }
        }
        return s;
    }
};

struct PairResult {
    std::string setting_a;
    std::string setting_b;
    std::optional<double> phi;  // orientation difference, rad
    std::int64_t coincidences = 0;
    double e_star = 0.0;
    double err = 0.0;  // standard error of e_star
    std::optional<double> e;
    std::optional<double> e_err;

    friend bool operator==(const PairResult&, const PairResult&) = default;
};

struct Provenance {
    std::string input;
    std::string digest;  // sha256 of the input file bytes
    std::map<std::string, std::map<std::string, std::string>> config;
    std::optional<std::uint64_t> seed;
    std::string generator;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct AnalysisReport {
    std::vector<PairResult> pairs;
    std::optional<double> s;
    std::optional<double> s_abs_err;
    double s_star = 0.0;
    double s_err = 0.0;
    double v_b = 0.0;
    std::vector<InequalityReport> verdicts;
    /// True when no genuine Bell inequality could be evaluated from the data.
    bool only_auxiliary = true;
    Provenance provenance;

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

inline AnalysisReport run_analysis(const CountDataset& ds, const AnalysisSettings& settings,
                                   Provenance provenance = {}) {
    if (ds.rows.empty()) throw InputError("empty dataset: no count rows");
    std::array<const CountRow*, 4> rows{};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto [a, b] = canonical_pairs()[k];
        rows[k] = ds.find(a, b);
        if (!rows[k])
            throw InputError(std::string("dataset lacks the canonical setting pair (") + a + ", " + b +
                             "); need (A,B), (A,D), (C,B), (C,D)");
    }
    for (const auto* r : rows)
        if (r->coincidences() == 0)
            throw InputError("zero coincidences for pair (" + r->setting_a + ", " + r->setting_b + ") at line " +
                             std::to_string(r->line));

    bool absolute = settings.r0.has_value();
    for (const auto& r : ds.rows) absolute = absolute && r.duration.has_value();

    AnalysisReport rep;
    for (const auto& r : ds.rows) {
        PairResult p;
        p.setting_a = r.setting_a;
        p.setting_b = r.setting_b;
        auto oa = settings.orientation.find(r.setting_a), ob = settings.orientation.find(r.setting_b);
        if (oa != settings.orientation.end() && ob != settings.orientation.end()) p.phi = oa->second - ob->second;
        p.coincidences = r.coincidences();
        const double n = static_cast<double>(p.coincidences);
        const double diff = static_cast<double>(r.n_pp + r.n_mm) - static_cast<double>(r.n_pm + r.n_mp);
        if (p.coincidences > 0) {
            p.e_star = renormalized_correlation(TwoChannelCounts(static_cast<double>(r.n_pp),
                                                                 static_cast<double>(r.n_pm),
                                                                 static_cast<double>(r.n_mp),
                                                                 static_cast<double>(r.n_mm)));
            p.err = std::sqrt(std::max(0.0, 1.0 - p.e_star * p.e_star) / n);
        }
        if (absolute) {
            const double emitted = *settings.r0 * *r.duration;
            if (n > emitted * (1.0 + kDataTolerance))
                throw InputError("more coincidences than emitted pairs for (" + r.setting_a + ", " + r.setting_b +
                                 "); check r0 and duration");
            p.e = diff / emitted;
            p.e_err = std::sqrt(std::max(0.0, n / emitted - *p.e * *p.e) / emitted);
        }
        rep.pairs.push_back(std::move(p));
    }

    auto pair_of = [&](std::size_t k) -> const PairResult& {
        const auto [a, b] = canonical_pairs()[k];
        for (const auto& p : rep.pairs)
            if (p.setting_a == a && p.setting_b == b) return p;
        throw std::logic_error("canonical pair vanished");
    };
    const PairResult &ab = pair_of(0), &ad = pair_of(1), &cb = pair_of(2), &cd = pair_of(3);

    const InequalityReport star = s_statistic(ab.e_star, ad.e_star, cb.e_star, cd.e_star, true);
    rep.s_star = star.lhs;
    rep.s_err = std::sqrt(ab.err * ab.err + ad.err * ad.err + cb.err * cb.err + cd.err * cd.err);
    rep.v_b = v_b_from_s_star(rep.s_star);
    rep.verdicts.push_back(star);

    if (absolute) {
        // Probabilities sum to one only if every emitted pair produced a coincidence.
        bool norm = true;
        for (const auto* r : rows) {
            const double emitted = *settings.r0 * *r->duration;
            norm = norm && std::abs(static_cast<double>(r->coincidences()) - emitted) <= kDataTolerance * emitted;
        }
        const InequalityReport chsh = s_statistic(*ab.e, *ad.e, *cb.e, *cd.e, false, norm);
        rep.s = chsh.lhs;
        rep.s_abs_err = std::sqrt(*ab.e_err * *ab.e_err + *ad.e_err * *ad.e_err + *cb.e_err * *cb.e_err +
                                  *cd.e_err * *cd.e_err);
        rep.verdicts.push_back(chsh);

        bool singles = true;
        for (const auto* r : rows) singles = singles && r->singles_a && r->singles_b;
        if (singles) {
            // p(A) pools every row measuring A on side 1; likewise p(B).
            auto single_rate = [&](const std::string& label, bool side_a) {
                double hits = 0.0, emitted = 0.0;
                for (const auto& r : ds.rows) {
                    if ((side_a ? r.setting_a : r.setting_b) != label) continue;
                    const auto s = side_a ? r.singles_a : r.singles_b;
                    if (!s) continue;
                    hits += static_cast<double>(*s);
                    emitted += *settings.r0 * *r.duration;
                }
                return hits / emitted;
            };
            auto pp = [&](std::size_t k) { return static_cast<double>(rows[k]->n_pp) / (*settings.r0 * *rows[k]->duration); };
            try {
                const ProbabilitySet ps(single_rate("A", true), single_rate("B", false), pp(0), pp(1), pp(2), pp(3));
                rep.verdicts.push_back(ch_report(ps));
            } catch (const std::invalid_argument& e) {
                throw InputError(std::string("singles and coincidences are inconsistent: ") + e.what());
            }
        }
    }

    rep.only_auxiliary = true;
    for (const auto& v : rep.verdicts) rep.only_auxiliary = rep.only_auxiliary && !v.genuine;
    rep.provenance = std::move(provenance);
    if (!rep.provenance.seed) {
        if (auto seed = ds.comment_value("seed")) {
            try {
                rep.provenance.seed = std::stoull(*seed);
            } catch (const std::exception&) {
            }
        }
    }
    if (rep.provenance.generator.empty())
        if (auto g = ds.comment_value("generator")) rep.provenance.generator = *g;
    return rep;
}

}  // namespace bellcheck
