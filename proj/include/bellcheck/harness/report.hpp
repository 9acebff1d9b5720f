#pragma once

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bellcheck/harness/analysis.hpp"
#include "bellcheck/harness/errors.hpp"
#include "bellcheck/inequalities.hpp"

namespace bellcheck {

using nlohmann::json;

namespace detail {

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace detail

inline json to_json(const InequalityReport& r) {
    return {{"name", to_string(r.name)}, {"lhs", r.lhs},         {"rhs", r.rhs},
            {"margin", r.margin},        {"violated", r.violated}, {"genuine", r.genuine}};
}

inline InequalityReport inequality_report_from_json(const json& j) {
    return {inequality_kind_from_string(j.at("name").get<std::string>()),
            j.at("lhs").get<double>(),
            j.at("rhs").get<double>(),
            j.at("margin").get<double>(),
            j.at("violated").get<bool>(),
            j.at("genuine").get<bool>()};
}

/// One human-readable verdict line; always states whether the inequality is genuine.
inline std::string verdict_line(const InequalityReport& r) {
    std::ostringstream os;
    os << std::setprecision(6);
    os << to_string(r.name) << ": lhs = " << r.lhs << ", rhs = " << r.rhs << ", margin = " << r.margin << " -> "
       << (r.violated ? "violated" : "fulfilled") << "; ";
    if (r.genuine) {
        os << "genuine Bell inequality (follows from local realism alone)";
        if (r.violated) os << "; the data are incompatible with every local-realistic model";
    } else {
        switch (r.name) {
            case InequalityKind::chsh_star:
                os << "not a genuine Bell inequality (renormalized correlations assume fair sampling)";
                break;
            case InequalityKind::fc:
                os << "not a genuine Bell inequality (assumes no-enhancement)";
                break;
            default:
                os << "not a genuine Bell inequality (outcome probabilities do not sum to one)";
                break;
        }
        if (r.violated) os << "; a violation does not refute local realism";
    }
    return os.str();
}

inline json to_json(const AnalysisReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"settings", {p.setting_a, p.setting_b}},
                         {"phi", detail::optional_json(p.phi)},
                         {"coincidences", p.coincidences},
                         {"e", detail::optional_json(p.e)},
                         {"e_err", detail::optional_json(p.e_err)},
                         {"e_star", p.e_star},
                         {"err", p.err}});
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
    json config = json::object();
    for (const auto& [section, keys] : r.provenance.config) config[section] = keys;
    return {{"pairs", pairs},
            {"s", detail::optional_json(r.s)},
            {"s_abs_err", detail::optional_json(r.s_abs_err)},
            {"s_star", r.s_star},
            {"s_err", r.s_err},
            {"v_b", r.v_b},
            {"verdicts", verdicts},
            {"only_auxiliary", r.only_auxiliary},
            {"provenance",
             {{"input", r.provenance.input},
              {"digest", r.provenance.digest},
              {"config", config},
              {"seed", detail::optional_json(r.provenance.seed)},
              {"generator", r.provenance.generator}}}};
}

inline AnalysisReport analysis_report_from_json(const json& j) {
    AnalysisReport r;
    for (const auto& p : j.at("pairs")) {
        PairResult pr;
        pr.setting_a = p.at("settings").at(0).get<std::string>();
        pr.setting_b = p.at("settings").at(1).get<std::string>();
        pr.phi = detail::optional_from<double>(p, "phi");
        pr.coincidences = p.at("coincidences").get<std::int64_t>();
        pr.e = detail::optional_from<double>(p, "e");
        pr.e_err = detail::optional_from<double>(p, "e_err");
        pr.e_star = p.at("e_star").get<double>();
        pr.err = p.at("err").get<double>();
        r.pairs.push_back(std::move(pr));
    }
    r.s = detail::optional_from<double>(j, "s");
    r.s_abs_err = detail::optional_from<double>(j, "s_abs_err");
    r.s_star = j.at("s_star").get<double>();
    r.s_err = j.at("s_err").get<double>();
    r.v_b = j.at("v_b").get<double>();
    for (const auto& v : j.at("verdicts")) r.verdicts.push_back(inequality_report_from_json(v));
    r.only_auxiliary = j.at("only_auxiliary").get<bool>();
    const auto& pv = j.at("provenance");
    r.provenance.input = pv.at("input").get<std::string>();
    r.provenance.digest = pv.at("digest").get<std::string>();
    for (const auto& [section, keys] : pv.at("config").items())
        r.provenance.config[section] = keys.get<std::map<std::string, std::string>>();
    r.provenance.seed = detail::optional_from<std::uint64_t>(pv, "seed");
    r.provenance.generator = pv.at("generator").get<std::string>();
    return r;
}

enum class ReportFormat { json, text };

inline ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "text") return ReportFormat::text;
    throw InputError("unknown report format '" + name + "' (expected json or text)");
}

inline std::string emit_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << std::setprecision(6);
    os << "Correlation analysis\n";
    os << "  input:  " << r.provenance.input << "\n";
    os << "  sha256: " << r.provenance.digest << "\n";
    if (r.provenance.seed) os << "  seed:   " << *r.provenance.seed << " (" << r.provenance.generator << ")\n";
    os << "\n";
    os << "pair    coincidences        E*      err";
    os << (r.s ? "            E      err\n" : "\n");
    for (const auto& p : r.pairs) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-3s %-3s %14lld %9.5f %8.5f", p.setting_a.c_str(), p.setting_b.c_str(),
                      static_cast<long long>(p.coincidences), p.e_star, p.err);
        os << buf;
        if (p.e) {
            std::snprintf(buf, sizeof buf, " %12.5g %8.2g", *p.e, *p.e_err);
            os << buf;
        }
        os << "\n";
    }
    os << "\nS* = " << r.s_star << " +/- " << r.s_err << "   (V_B = " << r.v_b << ")\n";
    if (r.s) os << "S  = " << *r.s << " +/- " << *r.s_abs_err << "\n";
    os << "\nVerdicts:\n";
    for (const auto& v : r.verdicts) os << "  " << verdict_line(v) << "\n";
    if (r.only_auxiliary)
        os << "\nOnly auxiliary-assumption inequalities were testable with these data; "
              "no genuine Bell inequality was evaluated.\n";
    os << "\n# plot-data: phi_rad e_star err\n";
    for (const auto& p : r.pairs) {
        if (!p.phi) continue;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.10f %.10f %.10f\n", *p.phi, p.e_star, p.err);
        os << buf;
    }
    return os.str();
}

inline std::string emit_report(const AnalysisReport& r, ReportFormat format) {
    if (format == ReportFormat::json) return to_json(r).dump(2) + "\n";
    return emit_text(r);
}

inline std::string emit_report(const AnalysisReport& r, const std::string& format) {
    return emit_report(r, parse_report_format(format));
}

}  // namespace bellcheck
