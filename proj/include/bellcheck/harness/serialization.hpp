#pragma once

// JSON forms of models, validation reports and search results.
//
// Model document:
//   {"cells": [...], "weights": [...],
//    "side1": {"settings": [...], "table": [[P1(cell, setting)...] per cell]},
//    "side2": {...}}

#include <string>
#include <vector>

#include <json.hpp>

#include "bellcheck/harness/errors.hpp"
#include "bellcheck/lhv_core.hpp"
#include "bellcheck/lhv_search.hpp"

namespace bellcheck {

using nlohmann::json;

inline json to_json(const FactorizableModel& m) {
    auto side = [](const ResponseTable& t) { return json{{"settings", t.settings()}, {"table", t.rows()}}; };
    return {{"cells", m.space().cells()},
            {"weights", m.space().weights()},
            {"side1", side(m.response1())},
            {"side2", side(m.response2())}};
}

inline FactorizableModel model_from_json(const json& j) {
    try {
        auto side = [&](const char* key, Side s) {
            const auto& t = j.at(key);
            return ResponseTable(s, t.at("settings").get<std::vector<std::string>>(),
                                 t.at("table").get<std::vector<std::vector<double>>>());
        };
        return {HiddenVariableSpace(j.at("cells").get<std::vector<std::string>>(),
                                    j.at("weights").get<std::vector<double>>()),
                side("side1", Side::one), side("side2", Side::two)};
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed model document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("malformed model document: ") + e.what());
    }
}

inline json to_json(const ValidationReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) {
        json e{{"kind", to_string(x.kind)}, {"message", x.message}, {"value", x.value}};
        if (x.cell >= 0) e["cell"] = x.cell;
        if (!x.setting.empty()) e["setting"] = x.setting;
        if (x.side) e["side"] = x.side;
        if (x.kind == Violation::Kind::normalization) e["deficit"] = x.deficit;
        v.push_back(std::move(e));
    }
    return {{"valid", r.valid()}, {"violations", v}};
}

inline json to_json(const SearchResult& r) {
    json strategies = json::array();
    for (std::size_t i = 0; i < r.mixture.side1().size(); ++i)
        for (std::size_t j = 0; j < r.mixture.side2().size(); ++j)
            strategies.push_back(r.mixture.side1()[i].label() + "|" + r.mixture.side2()[j].label());
    return {{"eta", r.eta},
            {"s_star_max", r.s_star_max},
            {"genuine_s", r.genuine_s},
            {"weights", r.mixture.weights()},
            {"strategy_pairs", strategies},
            {"coincidences", r.coincidences},
            {"parameter_independence_defect", r.statistics.parameter_independence_defect()}};
}

}  // namespace bellcheck
