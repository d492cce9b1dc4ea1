// cli.hpp: command-line front end (flags -> RunConfig -> files + exit code).

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmeur/config.hpp"
#include "nmeur/errors.hpp"
#include "nmeur/output.hpp"
#include "nmeur/tasks.hpp"

namespace nmeur {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitComputation = 3, kExitIo = 4 };

// One-line machine-readable error record.
inline std::string error_record(const std::string& kind, const std::string& message, int code,
                                const std::string& field = {}) {
    json rec = {{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!field.empty()) rec["field"] = field;
    return rec.dump();
}

inline json load_config_document(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    json doc = json::parse(text.str(), nullptr, false);
    if (doc.is_discarded()) throw ConfigError("", "parse error: " + path + " is not valid JSON");
    return doc;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Atom-cavity-reservoir dynamics, non-Markovianity and entropic uncertainty tables", "nmeur"};
    std::string config_path, out_path;
    std::size_t workers = 0;
    std::vector<std::string> overrides;
    bool json_flag = false;
    int figure_id = 0;

    app.add_option("--config", config_path, "JSON config document");
    app.add_option("--out", out_path, "output file (directory for figures)");
    app.add_option("--workers", workers, "worker threads for sweeps")->check(CLI::Range(1, 1024));
    app.add_option("--set", overrides, "override a config field, e.g. --set model.theta=0.5")->allow_extra_args(false);
    app.add_flag("--json", json_flag, "also write rows as a JSON array");
    app.require_subcommand(1, 1);
    app.fallthrough();
    for (const char* name : {"gamma-curve", "series", "nonmarkov-sweep", "uncertainty-surface", "wmr-sweep"})
        app.add_subcommand(name, std::string("run the ") + name + " task");
    auto* fig = app.add_subcommand("figure", "reproduce a figure (2-8), one CSV per panel");
    fig->add_option("id", figure_id, "figure number")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << error_record("usage", e.what(), kExitConfig) << "\n";
        return kExitConfig;
    }

    try {
        json doc = load_config_document(config_path);
        if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");
        for (const auto& o : overrides) apply_override(doc, o);
        const auto* sub = app.get_subcommands().front();
        doc["task"] = sub->get_name();
        if (sub == fig) {
            if (doc.contains("figure") && !doc["figure"].is_object()) throw ConfigError("figure", "must be an object");
            if (figure_id < 0) throw ConfigError("figure.id", "figures 2-8 only");
            doc["figure"]["id"] = figure_id;
        }
        if (!out_path.empty()) doc["output"] = out_path;
        if (workers) doc["workers"] = workers;
        if (json_flag) doc["json"] = true;

        const RunConfig config = config_from_json(doc);
        if (config.task != Task::figure && !config.state.in_canonical_range()) {
            err << "warning: initial angles outside theta in [0, pi/2], phi in [0, pi]; the state formula is "
                   "periodic and is evaluated as given\n";
        }
        const auto files = plan_outputs(run_task(config), config);
        write_outputs(files);
        for (const auto& f : files) out << f.path.string() << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << error_record("config", e.what(), kExitConfig, e.field()) << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << error_record("io", e.what(), kExitIo) << "\n";
        return kExitIo;
    } catch (const ComputationError& e) {
        err << error_record("computation", e.what(), kExitComputation) << "\n";
        return kExitComputation;
    } catch (const std::exception& e) {
        err << error_record("computation", e.what(), kExitComputation) << "\n";
        return kExitComputation;
    }
}

} // namespace nmeur
