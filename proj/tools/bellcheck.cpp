#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bellcheck/bellcheck.hpp"

namespace {

using namespace bellcheck;

enum Exit : int { ok = 0, input_error = 1, internal_error = 2 };

struct Common {
    std::string config;
    std::string output;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
    auto* opt = cmd->add_option("--config", c.config, "configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--output", c.output, "output path (stdout if absent)");
    cmd->add_option("--format", c.format, "json or text");
    cmd->add_option("--seed", c.seed, "RNG seed");
}

Config load_config(const Common& c) {
    if (c.config.empty()) return {};
    return Config::load(c.config);
}

void write_out(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw InputError("cannot write " + c.output);
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string text_of_validation(const ValidationReport& r) {
    std::ostringstream os;
    os << (r.valid() ? "model is valid\n" : "model is invalid\n");
    for (const auto& v : r.violations) os << "  " << to_string(v.kind) << ": " << v.message << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local hidden-variable and Bell inequality toolkit"};
    app.require_subcommand(1);

    Common c;
    std::string model_path, input_path;

    auto* validate = app.add_subcommand("validate", "check a factorizable model document");
    validate->add_option("model", model_path, "model JSON")->required();
    add_common(validate, c, false);

    auto* predict = app.add_subcommand("predict", "closed-form quantum predictions");
    add_common(predict, c, true);

    auto* analyze = app.add_subcommand("analyze", "analyze a coincidence-count CSV");
    analyze->add_option("input", input_path, "counts CSV")->required();
    add_common(analyze, c, false);

    auto* search = app.add_subcommand("search", "maximize CHSH-star over local strategies");
    add_common(search, c, false);
    search->add_option("--model", model_path, "write the optimal mixture of the first efficiency as a model");

    auto* simulate = app.add_subcommand("simulate", "sample counts from down-conversion predictions");
    add_common(simulate, c, true);

    auto* report = app.add_subcommand("report", "re-render an analysis report");
    report->add_option("input", input_path, "report JSON")->required();
    add_common(report, c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : input_error;
    }

    try {
        parse_report_format(c.format);
        if (*validate) {
            const json doc = json::parse(read_file(model_path));
            const FactorizableModel m = model_from_json(doc);
            const ValidationReport r = validate_model(m);
            write_out(c, c.format == "text" ? text_of_validation(r) : dump(to_json(r)));
            return r.valid() ? ok : input_error;
        }
        if (*predict) {
            write_out(c, dump(bellcheck::predict(load_config(c))));
            return ok;
        }
        if (*analyze) {
            const auto rep = analyze_file(input_path, load_config(c));
            write_out(c, emit_report(rep, c.format));
            return ok;
        }
        if (*search) {
            const auto results = bellcheck::search(load_config(c));
            json out{{"results", json::array()}};
            for (const auto& r : results) out["results"].push_back(to_json(r));
            write_out(c, dump(out));
            if (!model_path.empty()) {
                std::ofstream m(model_path, std::ios::binary);
                if (!m) throw InputError("cannot write " + model_path);
                m << dump(to_json(mixture_to_model(results.front().mixture)));
            }
            return ok;
        }
        if (*simulate) {
            if (!c.seed) throw InputError("simulate requires --seed");
            const auto ds = bellcheck::simulate(load_config(c), *c.seed);
            std::ostringstream os;
            write_csv(ds, os);
            write_out(c, os.str());
            return ok;
        }
        if (*report) {
            const auto rep = analysis_report_from_json(json::parse(read_file(input_path)));
            write_out(c, emit_report(rep, c.format));
            return ok;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal_error;
    }
    return internal_error;
}
