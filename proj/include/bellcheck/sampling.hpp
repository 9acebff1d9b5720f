#pragma once

// Synthetic count datasets by multinomial sampling.
//
// Stream semantics: one std::mt19937_64 seeded with the given seed drives the
// whole dataset. Pairs are sampled in the order given; within a pair the nine
// outcome cells are drawn as sequential binomials in the order
// (+,+) (+,-) (+,u) (-,+) (-,-) (-,u) (u,+) (u,-) (u,u).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcheck/harness/count_dataset.hpp"
#include "bellcheck/inequalities.hpp"
#include "bellcheck/lhv_search.hpp"

namespace bellcheck {

inline constexpr const char* kGeneratorName = "mt19937_64";

struct PairDistribution {
    std::string setting_a;
    std::string setting_b;
    OutcomeTable outcomes{};  // p(o1, o2), sums to one
};

/// Outcome table for normalized two-channel probabilities (no undetected mass).
inline OutcomeTable outcome_table(const TwoChannelCounts& tc) {
    if (std::abs(tc.total() - 1.0) > kDataTolerance)
        throw std::invalid_argument("outcome table: two-channel probabilities must sum to 1");
    OutcomeTable t{};
    t[0][0] = tc.ppp();
    t[0][1] = tc.ppm();
    t[1][0] = tc.pmp();
    t[1][1] = tc.pmm();
    return t;
}

/// Per-emitted-pair outcome table for a two-channel experiment: each photon
/// is detected independently with probability eta, and detected pairs split
/// over the four channels in proportion to the coincidence rates.
inline OutcomeTable detection_table(const TwoChannelCounts& rates, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("detection table: eta must be in [0, 1]");
    const double total = rates.total();
    if (!(total > 0.0)) throw std::invalid_argument("detection table: rates are all zero");
    OutcomeTable t{};
    const double both = eta * eta;
    t[0][0] = both * rates.ppp() / total;
    t[0][1] = both * rates.ppm() / total;
    t[1][0] = both * rates.pmp() / total;
    t[1][1] = both * rates.pmm() / total;
    const double single = 0.5 * eta * (1.0 - eta);
    t[0][2] = t[1][2] = single;
    t[2][0] = t[2][1] = single;
    t[2][2] = (1.0 - eta) * (1.0 - eta);
    return t;
}

struct SampleOptions {
    /// When set, rows carry duration = n_pairs / r0.
    std::optional<double> r0;
    bool with_singles = true;
};

inline CountDataset sample_counts(const std::vector<PairDistribution>& pairs, std::int64_t n_pairs,
                                  std::uint64_t seed, const SampleOptions& opt = {}) {
    if (n_pairs < 1) throw std::invalid_argument("sample_counts: n_pairs must be at least 1");
    std::mt19937_64 rng(seed);
    CountDataset ds;
    ds.comments.push_back(std::string("generator=") + kGeneratorName + " seed=" + std::to_string(seed) +
                          " pairs_per_setting=" + std::to_string(n_pairs));
    for (const auto& pd : pairs) {
        double sum = 0.0;
        for (const auto& row : pd.outcomes)
            for (double p : row) {
                if (!(p >= 0.0)) throw std::invalid_argument("sample_counts: negative probability");
                sum += p;
            }
        if (std::abs(sum - 1.0) > kDataTolerance)
            throw std::invalid_argument("sample_counts: outcome probabilities must sum to 1");

        std::size_t last = 0;
        for (std::size_t c = 0; c < 9; ++c)
            if (pd.outcomes[c / 3][c % 3] > 0.0) last = c;

        std::array<std::array<std::int64_t, 3>, 3> n{};
        std::int64_t remaining = n_pairs;
        double mass = 1.0;
        for (std::size_t c = 0; c <= last; ++c) {
            const double p = pd.outcomes[c / 3][c % 3];
            std::int64_t k = 0;
            if (c == last) {
                k = remaining;
            } else if (remaining > 0 && p > 0.0) {
                const double q = std::min(1.0, p / mass);
                k = std::binomial_distribution<std::int64_t>(remaining, q)(rng);
            }
            n[c / 3][c % 3] = k;
            remaining -= k;
            mass = std::max(0.0, mass - p);
        }

        CountRow r;
        r.setting_a = pd.setting_a;
        r.setting_b = pd.setting_b;
        r.n_pp = n[0][0];
        r.n_pm = n[0][1];
        r.n_mp = n[1][0];
        r.n_mm = n[1][1];
        if (opt.with_singles) {
            r.singles_a = n[0][0] + n[0][1] + n[0][2];
            r.singles_b = n[0][0] + n[1][0] + n[2][0];
        }
        if (opt.r0) r.duration = static_cast<double>(n_pairs) / *opt.r0;
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

}  // namespace bellcheck
