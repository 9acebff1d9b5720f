#pragma once

// Coincidence-count datasets and their CSV form:
//
//   setting_a,setting_b,n_pp,n_pm,n_mp,n_mm[,singles_a,singles_b,duration]
//
// Lines starting with '#' are comments (simulated files record the generator
// and seed there). singles_a / singles_b count detections in the + channel of
// each side, regardless of the partner.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bellcheck/harness/errors.hpp"

namespace bellcheck {

struct CountRow {
    std::string setting_a;
    std::string setting_b;
    std::int64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;
    std::optional<std::int64_t> singles_a;
    std::optional<std::int64_t> singles_b;
    std::optional<double> duration;  // s
    std::size_t line = 0;            // 1-based source line, 0 if synthetic

    std::int64_t coincidences() const { return n_pp + n_pm + n_mp + n_mm; }
};

struct CountDataset {
    std::vector<CountRow> rows;
    /// Comment lines (without the leading '#') in file order.
    std::vector<std::string> comments;

    const CountRow* find(const std::string& a, const std::string& b) const {
        for (const auto& r : rows)
            if (r.setting_a == a && r.setting_b == b) return &r;
        return nullptr;
    }

    /// Value of a "key=value" comment, if present.
    std::optional<std::string> comment_value(const std::string& key) const {
        for (const auto& c : comments) {
            std::istringstream is(c);
            std::string tok;
            while (is >> tok) {
                const auto eq = tok.find('=');
                if (eq != std::string::npos && tok.substr(0, eq) == key) return tok.substr(eq + 1);
            }
        }
        return std::nullopt;
    }
};

namespace detail {

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline std::string at_line(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

}  // namespace detail

inline CountDataset parse_counts(std::istream& in, const std::string& source = "<input>") {
    static const std::vector<std::string> required = {"setting_a", "setting_b", "n_pp", "n_pm", "n_mp", "n_mm"};
    CountDataset ds;
    std::map<std::string, std::size_t> column;
    bool have_header = false;
    std::size_t header_width = 0;
    std::set<std::pair<std::string, std::string>> seen;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            ds.comments.push_back(detail::trim(line.substr(1)));
            continue;
        }
        const auto fields = detail::split_csv(line);
        if (!have_header) {
            for (std::size_t i = 0; i < fields.size(); ++i) column[fields[i]] = i;
            for (const auto& name : required)
                if (!column.count(name))
                    throw InputError(detail::at_line(source, lineno) + "header is missing column '" + name + "'");
            header_width = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != header_width)
            throw InputError(detail::at_line(source, lineno) + "expected " + std::to_string(header_width) +
                             " fields, found " + std::to_string(fields.size()));

        auto integer = [&](const std::string& name) -> std::optional<std::int64_t> {
            auto it = column.find(name);
            if (it == column.end()) return std::nullopt;
            const std::string& f = fields[it->second];
            if (f.empty()) return std::nullopt;
            std::int64_t v = 0;
            const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || p != f.data() + f.size())
                throw InputError(detail::at_line(source, lineno) + "column '" + name + "' is not an integer: '" + f +
                                 "'");
            if (v < 0)
                throw InputError(detail::at_line(source, lineno) + "column '" + name + "' is negative (" + f + ")");
            return v;
        };
        auto count = [&](const std::string& name) {
            auto v = integer(name);
            if (!v) throw InputError(detail::at_line(source, lineno) + "column '" + name + "' is empty");
            return *v;
        };

        CountRow row;
        row.line = lineno;
        row.setting_a = fields[column["setting_a"]];
        row.setting_b = fields[column["setting_b"]];
        if (row.setting_a.empty() || row.setting_b.empty())
            throw InputError(detail::at_line(source, lineno) + "empty setting label");
        row.n_pp = count("n_pp");
        row.n_pm = count("n_pm");
        row.n_mp = count("n_mp");
        row.n_mm = count("n_mm");
        row.singles_a = integer("singles_a");
        row.singles_b = integer("singles_b");
        if (auto it = column.find("duration"); it != column.end() && !fields[it->second].empty()) {
            const std::string& f = fields[it->second];
            try {
                std::size_t used = 0;
                const double d = std::stod(f, &used);
                if (used != f.size() || !(d > 0.0)) throw std::invalid_argument("bad");
                row.duration = d;
            } catch (const std::exception&) {
                throw InputError(detail::at_line(source, lineno) + "duration must be a positive number: '" + f + "'");
            }
        }
        if (!seen.insert({row.setting_a, row.setting_b}).second)
            throw InputError(detail::at_line(source, lineno) + "duplicate setting pair (" + row.setting_a + ", " +
                             row.setting_b + ")");
        ds.rows.push_back(std::move(row));
    }
    if (!have_header) throw InputError(source + ": empty file (no header row)");
    return ds;
}

inline CountDataset ingest_counts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    return parse_counts(in, path);
}

inline void write_csv(const CountDataset& ds, std::ostream& out) {
    for (const auto& c : ds.comments) out << "# " << c << '\n';
    bool singles = !ds.rows.empty(), duration = !ds.rows.empty();
    for (const auto& r : ds.rows) {
        singles = singles && r.singles_a && r.singles_b;
        duration = duration && r.duration.has_value();
    }
    out << "setting_a,setting_b,n_pp,n_pm,n_mp,n_mm";
    if (singles || duration) out << ",singles_a,singles_b";
    if (duration) out << ",duration";
    out << '\n';
    for (const auto& r : ds.rows) {
        out << r.setting_a << ',' << r.setting_b << ',' << r.n_pp << ',' << r.n_pm << ',' << r.n_mp << ','
            << r.n_mm;
        if (singles || duration) {
            out << ',';
            if (singles) out << *r.singles_a;
            out << ',';
            if (singles) out << *r.singles_b;
        }
        if (duration) out << ',' << std::setprecision(17) << *r.duration;
        out << '\n';
    }
}

}  // namespace bellcheck
