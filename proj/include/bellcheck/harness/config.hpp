#pragma once

// Minimal TOML-compatible configuration:
//
//   # comment
//   [section]
//   key = 1.5
//   name = "text"
//   list = [0.5, 0.6, 0.7]
//   flag = true

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bellcheck/harness/count_dataset.hpp"
#include "bellcheck/harness/errors.hpp"

namespace bellcheck {

class Config {
public:
    using Section = std::map<std::string, std::string>;

    static Config parse(std::istream& in, const std::string& source = "<config>") {
        Config cfg;
        std::string raw, section;
        std::size_t lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string line = strip_comment(raw);
            line = detail::trim(line);
            if (line.empty()) continue;
            const std::string where = source + ":" + std::to_string(lineno) + ": ";
            if (line.front() == '[') {
                if (line.back() != ']') throw InputError(where + "unterminated section header");
                section = detail::trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw InputError(where + "empty section name");
                cfg.sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw InputError(where + "expected key = value");
            const std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw InputError(where + "empty key");
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            cfg.sections_[section][key] = value;
        }
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open config " + path);
        return parse(in, path);
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key);
    }
    bool has_section(const std::string& section) const { return sections_.count(section) != 0; }

    std::optional<std::string> get_string(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    }

    std::optional<double> get_double(const std::string& section, const std::string& key) const {
        auto v = get_string(section, key);
        if (!v) return std::nullopt;
        return to_double(*v, section, key);
    }

    double get_double_or(const std::string& section, const std::string& key, double fallback) const {
        return get_double(section, key).value_or(fallback);
    }

    std::optional<bool> get_bool(const std::string& section, const std::string& key) const {
        auto v = get_string(section, key);
        if (!v) return std::nullopt;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw InputError("config [" + section + "] " + key + ": expected true or false, got '" + *v + "'");
    }

    /// A scalar or a bracketed list of numbers.
    std::optional<std::vector<double>> get_list(const std::string& section, const std::string& key) const {
        auto v = get_string(section, key);
        if (!v) return std::nullopt;
        std::string body = *v;
        if (!body.empty() && body.front() == '[') {
            if (body.back() != ']') throw InputError("config [" + section + "] " + key + ": unterminated list");
            body = body.substr(1, body.size() - 2);
        }
        std::vector<double> out;
        std::istringstream is(body);
        std::string item;
        while (std::getline(is, item, ',')) {
            item = detail::trim(item);
            if (item.empty()) continue;
            out.push_back(to_double(item, section, key));
        }
        return out;
    }

    const std::map<std::string, Section>& sections() const { return sections_; }

private:
    static std::string strip_comment(const std::string& line) {
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) return line.substr(0, i);
        }
        return line;
    }

    static double to_double(const std::string& s, const std::string& section, const std::string& key) {
        try {
            std::size_t used = 0;
            const double d = std::stod(s, &used);
            if (used == s.size()) return d;
        } catch (const std::exception&) {
        }
        throw InputError("config [" + section + "] " + key + ": not a number: '" + s + "'");
    }

    std::map<std::string, Section> sections_;
};

}  // namespace bellcheck
