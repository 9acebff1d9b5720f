#pragma once

// Config-driven pipelines behind the CLI subcommands.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellcheck/harness/analysis.hpp"
#include "bellcheck/harness/config.hpp"
#include "bellcheck/harness/count_dataset.hpp"
#include "bellcheck/harness/digest.hpp"
#include "bellcheck/harness/errors.hpp"
#include "bellcheck/harness/report.hpp"
#include "bellcheck/harness/serialization.hpp"
#include "bellcheck/inequalities.hpp"
#include "bellcheck/lhv_search.hpp"
#include "bellcheck/quantum_experiments.hpp"
#include "bellcheck/sampling.hpp"

namespace bellcheck {

inline PdcConfig pdc_from_config(const Config& cfg) {
    PdcConfig p;
    p.v = cfg.get_double_or("pdc", "v", p.v);
    p.eta = cfg.get_double_or("pdc", "eta", p.eta);
    p.r0 = cfg.get_double_or("pdc", "r0", p.r0);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("config ") + e.what());
    }
    return p;
}

/// Closed-form predictions for whichever of [cascade], [pdc] and
/// [kinematics] the configuration contains.
inline json predict(const Config& cfg) {
    json out = json::object();
    const auto best = optimal_angles();
    out["optimal_angles"] = {{"phi", best.angles.as_array()}, {"objective_max", best.max_value}};

    if (cfg.has_section("cascade")) {
        CascadeConfig c;
        c.theta = cfg.get_double_or("cascade", "theta", c.theta);
        c.zeta = cfg.get_double_or("cascade", "zeta", c.zeta);
        c.r0 = cfg.get_double_or("cascade", "r0", c.r0);
        c.alpha = cfg.get_double_or("cascade", "alpha", c.alpha);
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("config ") + e.what());
        }
        // Explicit eta / v override the aperture-derived values.
        const auto optics = cascade_optics(c.theta, c.zeta, c.alpha);
        const double eta = cfg.get_double_or("cascade", "eta", optics.eta);
        const double v = cfg.get_double_or("cascade", "v", optics.v);
        if (!(eta >= 0.0 && eta <= 1.0) || !(v >= 0.0 && v <= 1.0))
            throw InputError("config [cascade] eta and v must lie in [0, 1]");

        json rates = json::array();
        const auto phis = best.angles.as_array();
        for (std::size_t k = 0; k < 4; ++k) {
            const auto r = cascade_rates(c.r0, eta, v, c.alpha, phis[k]);
            rates.push_back({{"settings", {canonical_pairs()[k].first, canonical_pairs()[k].second}},
                             {"phi", phis[k]},
                             {"r1", r.r1},
                             {"r2", r.r2},
                             {"r12", r.r12}});
        }
        const auto verdicts = photon_cascade_verdicts(c.alpha, eta, v, best.angles);
        const auto bi = bi_margin(c.alpha, eta, v);
        const auto single = cascade_bi_maximum(c.zeta > 0 ? c.zeta : 1.0, false);
        const auto both = cascade_bi_maximum(c.zeta > 0 ? c.zeta : 1.0, true);
        out["cascade"] = {
            {"theta", c.theta},
            {"zeta", c.zeta},
            {"alpha", c.alpha},
            {"r0", c.r0},
            {"eta", eta},
            {"v", v},
            {"rates", rates},
            {"bi", {{"lhs", bi.lhs}, {"rhs", 2.0}, {"fulfilled", bi.fulfilled}}},
            {"ch", to_json(verdicts.ch)},
            {"ch_reduced_lhs", verdicts.ch_reduced_lhs},
            {"fc", to_json(verdicts.fc)},
            {"fc_reduced_lhs", verdicts.fc_reduced_lhs},
            {"aperture_maximum",
             {{"single", {{"max_lhs", single.max_lhs}, {"theta_star", single.theta_star}}},
              {"both_detectors", {{"max_lhs", both.max_lhs}, {"theta_star", both.theta_star}}}}}};
    }

    if (cfg.has_section("pdc")) {
        const PdcConfig p = pdc_from_config(cfg);
        json pairs = json::array();
        std::array<double, 4> e{};
        const auto phis = best.angles.as_array();
        for (std::size_t k = 0; k < 4; ++k) {
            const auto r = two_channel_rates(p, phis[k]);
            e[k] = r.sum() > 0 ? renormalized_correlation(r.counts()) : 0.0;
            pairs.push_back({{"settings", {canonical_pairs()[k].first, canonical_pairs()[k].second}},
                             {"phi", phis[k]},
                             {"rpp", r.rpp},
                             {"rpm", r.rpm},
                             {"rmp", r.rmp},
                             {"rmm", r.rmm},
                             {"e_star", e[k]}});
        }
        json threshold = nullptr;
        if (p.v > kSqrt2 / 2) threshold = bi1_min_efficiency(p.v);
        out["pdc"] = {{"v", p.v},
                      {"eta", p.eta},
                      {"r0", p.r0},
                      {"pairs", pairs},
                      {"s_star", to_json(s_statistic(e[0], e[1], e[2], e[3], true))},
                      {"min_efficiency", threshold}};
    }

    if (cfg.has_section("kinematics")) {
        KinematicsInput k{};
        const auto mass = cfg.get_double("kinematics", "mass");
        const auto speed = cfg.get_double("kinematics", "speed");
        if (!mass || !speed) throw InputError("config [kinematics] needs mass and speed");
        k.mass = *mass;
        k.speed = *speed;
        k.separation = cfg.get_double("kinematics", "separation");
        k.measure_time = cfg.get_double("kinematics", "measure_time");
        SpacelikeConstraints s;
        try {
            s = spacelike_constraints(k);
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("config ") + e.what());
        }
        out["kinematics"] = {{"mass", k.mass},
                             {"speed", k.speed},
                             {"l_min", s.l_min},
                             {"dx_dv", s.dx_dv},
                             {"dt_arrival", detail::optional_json(s.dt_arrival)},
                             {"l_meas", detail::optional_json(s.l_meas)}};
    }
    return out;
}

/// Two-channel dataset sampled from the down-conversion rate formulas at the
/// canonical settings. [simulate] pairs = emitted pairs per setting pair.
inline CountDataset simulate(const Config& cfg, std::uint64_t seed) {
    const PdcConfig p = pdc_from_config(cfg);
    const double pairs = cfg.get_double_or("simulate", "pairs", 1e6);
    if (!(pairs >= 1.0) || pairs > 9e18) throw InputError("config [simulate] pairs must be a positive count");
    const AnalysisSettings settings = AnalysisSettings::from_config(cfg);
    std::vector<PairDistribution> dists;
    for (const auto& [a, b] : canonical_pairs()) {
        const double phi = settings.orientation.at(a) - settings.orientation.at(b);
        const auto rates = two_channel_rates(p, phi);
        dists.push_back({a, b, detection_table(rates.counts(), p.eta)});
    }
    SampleOptions opt;
    opt.r0 = p.r0;
    return sample_counts(dists, static_cast<std::int64_t>(pairs), seed, opt);
}

/// maximize_s_star over the efficiencies listed in [search] eta.
inline std::vector<SearchResult> search(const Config& cfg) {
    const auto etas = cfg.get_list("search", "eta").value_or(std::vector<double>{0.8});
    if (etas.empty()) throw InputError("config [search] eta is empty");
    SearchOptions opt;
    opt.tolerance = cfg.get_double_or("search", "tolerance", opt.tolerance);
    std::vector<SearchResult> out;
    for (double eta : etas) {
        if (!(eta > 0.0 && eta <= 1.0)) throw InputError("config [search] eta values must lie in (0, 1]");
        out.push_back(maximize_s_star(eta, opt));
    }
    return out;
}

inline AnalysisReport analyze_file(const std::string& path, const Config& cfg) {
    const std::string bytes = read_file(path);
    std::istringstream in(bytes);
    const CountDataset ds = parse_counts(in, path);
    Provenance prov;
    prov.input = path;
    prov.digest = sha256_hex(bytes);
    for (const auto& [section, keys] : cfg.sections()) prov.config[section] = keys;
    return run_analysis(ds, AnalysisSettings::from_config(cfg), std::move(prov));
}

}  // namespace bellcheck
