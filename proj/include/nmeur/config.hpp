// config.hpp: run configuration parsing, validation and serialization.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nmeur/errors.hpp"
#include "nmeur/model.hpp"
#include "nmeur/propagator.hpp"

namespace nmeur {

using json = nlohmann::json;

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Task { gamma_curve, series, nonmarkov_sweep, uncertainty_surface, wmr_sweep, figure };

inline std::string to_string(Task t) {
    switch (t) {
    case Task::gamma_curve: return "gamma-curve";
    case Task::series: return "series";
    case Task::nonmarkov_sweep: return "nonmarkov-sweep";
    case Task::uncertainty_surface: return "uncertainty-surface";
    case Task::wmr_sweep: return "wmr-sweep";
    case Task::figure: return "figure";
    }
    return "unknown";
}

inline std::optional<Task> task_from_string(std::string_view s) {
    for (Task t : {Task::gamma_curve, Task::series, Task::nonmarkov_sweep, Task::uncertainty_surface, Task::wmr_sweep,
                   Task::figure}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

struct ModelConfig {
    double omega{1.0};
    double theta{1.0};
    bool memoryless{false};
    double gamma{1.0};
    double center_frequency{0.0};

    ModelParams params() const {
        ModelParams p{omega, theta, Lorentzian{gamma}, center_frequency};
        if (memoryless) p.reservoir = Memoryless{};
        return p;
    }

    bool operator==(const ModelConfig&) const = default;
};

struct GridConfig {
    double t_max{100.0};
    std::optional<double> dt;
    std::optional<std::size_t> n_points;

    TimeGrid grid() const {
        if (n_points) return TimeGrid::span(t_max, *n_points);
        return TimeGrid::stepped(t_max, dt.value_or(1e-3));
    }

    bool operator==(const GridConfig&) const = default;
};

struct SweepConfig {
    double gamma_min{0.1};  // gamma / Omega
    double gamma_max{100.0};
    std::size_t points{30};

    bool operator==(const SweepConfig&) const = default;
};

struct SurfaceConfig {
    double time{10.0};  // Omega t
    std::size_t theta_points{41};
    std::size_t phi_points{41};

    bool operator==(const SurfaceConfig&) const = default;
};

struct WmrConfig {
    double time{10.0};  // Omega t
    std::size_t m_points{100};
    std::optional<std::vector<double>> m_grid;

    std::vector<double> grid() const {
        if (m_grid) return *m_grid;
        std::vector<double> m(m_points);
        for (std::size_t i = 0; i < m_points; ++i)
            m[i] = static_cast<double>(i) / static_cast<double>(m_points - 1);
        return m;
    }

    bool operator==(const WmrConfig&) const = default;
};

// Overrides for figure reproduction; unset fields take the figure's defaults.
struct FigureConfig {
    int id{0};
    std::optional<double> eval_time;
    std::optional<double> theta_ratio;
    std::optional<std::string> reservoir;  // "memoryless" | "lorentzian"
    std::optional<std::size_t> resolution;
    std::optional<double> t_max;
    std::optional<double> dt;

    bool operator==(const FigureConfig&) const = default;
};

struct RunConfig {
    Task task{Task::series};
    ModelConfig model;
    PureStateAngles state{std::numbers::pi / 4, std::numbers::pi / 8};
    GridConfig grid;
    std::optional<GammaMethod> method;  // empty: chosen from the reservoir
    SweepConfig sweep;
    SurfaceConfig surface;
    WmrConfig wmr;
    FigureConfig figure;
    std::size_t workers{1};
    std::string output;  // file for single-table tasks, directory for figures
    bool json_mirror{false};

    bool operator==(const RunConfig& o) const {
        return task == o.task && model == o.model && state.theta_angle == o.state.theta_angle &&
               state.phi == o.state.phi && grid == o.grid && method == o.method && sweep == o.sweep &&
               surface == o.surface && wmr == o.wmr && figure == o.figure && workers == o.workers &&
               output == o.output && json_mirror == o.json_mirror;
    }
};

namespace detail {

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : obj.items()) {
        bool known = false;
        for (auto allowed : keys) known = known || k == allowed;
        if (!known) throw ConfigError(join(path, k), "unknown field");
    }
}

inline const json* child(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline const json& object_at(const json& obj, const char* key, const std::string& path, const json& empty) {
    const json* v = child(obj, key);
    if (!v) return empty;
    if (!v->is_object()) throw ConfigError(join(path, key), "must be an object");
    return *v;
}

inline std::optional<double> number_at(const json& obj, const char* key, const std::string& path) {
    const json* v = child(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(join(path, key), "must be a number");
    return v->get<double>();
}

inline std::optional<std::size_t> count_at(const json& obj, const char* key, const std::string& path) {
    const json* v = child(obj, key);
    if (!v) return std::nullopt;
    if (v->is_number_unsigned()) return v->get<std::size_t>();
    if (v->is_number_integer() && v->get<long long>() >= 0) return static_cast<std::size_t>(v->get<long long>());
    if (v->is_number_float()) {
        const double d = v->get<double>();
        if (d >= 0.0 && d == std::floor(d) && d < 1e15) return static_cast<std::size_t>(d);
    }
    throw ConfigError(join(path, key), "must be a non-negative integer");
}

inline std::optional<std::string> string_at(const json& obj, const char* key, const std::string& path) {
    const json* v = child(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(join(path, key), "must be a string");
    return v->get<std::string>();
}

inline void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

inline bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
inline bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace detail

inline std::optional<GammaMethod> method_from_string(std::string_view s) {
    for (GammaMethod m : {GammaMethod::analytic, GammaMethod::memoryless, GammaMethod::oracle})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

// Every constraint violation raises ConfigError naming the field path.
inline void validate(const RunConfig& c) {
    using detail::finite_nonneg;
    using detail::finite_pos;
    using detail::require;
    require(finite_pos(c.model.omega), "model.omega", "must be finite and > 0");
    require(finite_nonneg(c.model.theta), "model.theta", "must be finite and >= 0");
    if (!c.model.memoryless)
        require(finite_pos(c.model.gamma), "model.reservoir.gamma", "must be finite and > 0");
    require(std::isfinite(c.model.center_frequency), "model.center_frequency", "must be finite");
    require(std::isfinite(c.state.theta_angle), "state.theta", "must be finite");
    require(std::isfinite(c.state.phi), "state.phi", "must be finite");

    require(finite_pos(c.grid.t_max), "grid.t_max", "must be finite and > 0");
    require(!(c.grid.dt && c.grid.n_points), "grid", "give either dt or n_points, not both");
    if (c.grid.dt) require(finite_pos(*c.grid.dt) && *c.grid.dt <= c.grid.t_max, "grid.dt", "must lie in (0, t_max]");
    if (c.grid.n_points) require(*c.grid.n_points >= 2, "grid.n_points", "must be >= 2");

    if (c.method) {
        const bool wants_memoryless = *c.method == GammaMethod::memoryless;
        require(wants_memoryless == c.model.memoryless, "method",
                to_string(*c.method) + " does not apply to a " + (c.model.memoryless ? "memoryless" : "lorentzian") +
                    " reservoir");
    }

    require(finite_pos(c.sweep.gamma_min), "sweep.gamma_min", "must be finite and > 0");
    require(finite_pos(c.sweep.gamma_max) && c.sweep.gamma_max >= c.sweep.gamma_min, "sweep.gamma_max",
            "must be finite and >= gamma_min");
    require(c.sweep.points >= 1, "sweep.points", "must be >= 1");
    require(c.sweep.points == 1 || c.sweep.gamma_max > c.sweep.gamma_min, "sweep.gamma_max",
            "must exceed gamma_min when points > 1");

    require(finite_nonneg(c.surface.time), "surface.time", "must be finite and >= 0");
    require(c.surface.theta_points >= 2, "surface.theta_points", "must be >= 2");
    require(c.surface.phi_points >= 2, "surface.phi_points", "must be >= 2");

    require(finite_nonneg(c.wmr.time), "wmr.time", "must be finite and >= 0");
    require(c.wmr.m_points >= 2, "wmr.m_points", "must be >= 2");
    if (c.wmr.m_grid) {
        require(!c.wmr.m_grid->empty(), "wmr.m_grid", "must not be empty");
        for (std::size_t i = 0; i < c.wmr.m_grid->size(); ++i) {
            const double m = (*c.wmr.m_grid)[i];
            require(m >= 0.0 && m <= 1.0, "wmr.m_grid[" + std::to_string(i) + "]", "must lie in [0, 1]");
        }
    }

    if (c.task == Task::figure)
        require(c.figure.id >= 2 && c.figure.id <= 8, "figure.id", "figures 2-8 only, got " + std::to_string(c.figure.id));
    else
        require(c.figure.id == 0 || (c.figure.id >= 2 && c.figure.id <= 8), "figure.id", "figures 2-8 only");
    const auto& f = c.figure;
    if (f.eval_time) require(finite_nonneg(*f.eval_time), "figure.eval_time", "must be finite and >= 0");
    if (f.theta_ratio) require(finite_nonneg(*f.theta_ratio), "figure.theta_ratio", "must be finite and >= 0");
    if (f.reservoir) {
        require(*f.reservoir == "memoryless" || *f.reservoir == "lorentzian", "figure.reservoir",
                "must be \"memoryless\" or \"lorentzian\"");
        require(f.id == 0 || f.id == 6 || f.id == 7, "figure.reservoir", "only figures 6 and 7 take a reservoir override");
    }
    if (f.resolution) require(*f.resolution >= 2, "figure.resolution", "must be >= 2");
    if (f.t_max) require(finite_pos(*f.t_max), "figure.t_max", "must be finite and > 0");
    if (f.dt) require(finite_pos(*f.dt) && *f.dt <= f.t_max.value_or(*f.dt), "figure.dt", "must lie in (0, t_max]");

    require(c.workers >= 1 && c.workers <= 1024, "workers", "must lie in [1, 1024]");
}

inline RunConfig config_from_json(const json& doc) {
    using namespace detail;
    if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");
    reject_unknown(doc, "", {"task", "model", "state", "grid", "method", "sweep", "surface", "wmr", "figure", "workers",
                             "output", "json"});
    const json empty = json::object();
    RunConfig c;

    if (auto t = string_at(doc, "task", "")) {
        auto task = task_from_string(*t);
        if (!task) throw ConfigError("task", "unknown task \"" + *t + "\"");
        c.task = *task;
    }

    const json& model = object_at(doc, "model", "", empty);
    reject_unknown(model, "model", {"omega", "theta", "reservoir", "center_frequency"});
    c.model.omega = number_at(model, "omega", "model").value_or(c.model.omega);
    c.model.theta = number_at(model, "theta", "model").value_or(c.model.theta);
    c.model.center_frequency = number_at(model, "center_frequency", "model").value_or(c.model.center_frequency);
    const json& res = object_at(model, "reservoir", "model", empty);
    reject_unknown(res, "model.reservoir", {"mode", "gamma"});
    if (auto mode = string_at(res, "mode", "model.reservoir")) {
        if (*mode != "lorentzian" && *mode != "memoryless")
            throw ConfigError("model.reservoir.mode", "must be \"lorentzian\" or \"memoryless\"");
        c.model.memoryless = *mode == "memoryless";
    }
    c.model.gamma = number_at(res, "gamma", "model.reservoir").value_or(c.model.gamma);

    const json& state = object_at(doc, "state", "", empty);
    reject_unknown(state, "state", {"theta", "phi"});
    c.state.theta_angle = number_at(state, "theta", "state").value_or(c.state.theta_angle);
    c.state.phi = number_at(state, "phi", "state").value_or(c.state.phi);

    const json& grid = object_at(doc, "grid", "", empty);
    reject_unknown(grid, "grid", {"t_max", "dt", "n_points"});
    c.grid.t_max = number_at(grid, "t_max", "grid").value_or(c.grid.t_max);
    c.grid.dt = number_at(grid, "dt", "grid");
    c.grid.n_points = count_at(grid, "n_points", "grid");

    if (auto m = string_at(doc, "method", "")) {
        if (*m != "auto") {
            c.method = method_from_string(*m);
            if (!c.method) throw ConfigError("method", "must be auto, analytic, memoryless or oracle");
        }
    }

    const json& sweep = object_at(doc, "sweep", "", empty);
    reject_unknown(sweep, "sweep", {"gamma_min", "gamma_max", "points"});
    c.sweep.gamma_min = number_at(sweep, "gamma_min", "sweep").value_or(c.sweep.gamma_min);
    c.sweep.gamma_max = number_at(sweep, "gamma_max", "sweep").value_or(c.sweep.gamma_max);
    c.sweep.points = count_at(sweep, "points", "sweep").value_or(c.sweep.points);

    const json& surface = object_at(doc, "surface", "", empty);
    reject_unknown(surface, "surface", {"time", "theta_points", "phi_points"});
    c.surface.time = number_at(surface, "time", "surface").value_or(c.surface.time);
    c.surface.theta_points = count_at(surface, "theta_points", "surface").value_or(c.surface.theta_points);
    c.surface.phi_points = count_at(surface, "phi_points", "surface").value_or(c.surface.phi_points);

    const json& wmr = object_at(doc, "wmr", "", empty);
    reject_unknown(wmr, "wmr", {"time", "m_points", "m_grid"});
    c.wmr.time = number_at(wmr, "time", "wmr").value_or(c.wmr.time);
    c.wmr.m_points = count_at(wmr, "m_points", "wmr").value_or(c.wmr.m_points);
    if (const json* g = child(wmr, "m_grid")) {
        if (!g->is_array()) throw ConfigError("wmr.m_grid", "must be an array of numbers");
        std::vector<double> m;
        for (std::size_t i = 0; i < g->size(); ++i) {
            if (!(*g)[i].is_number()) throw ConfigError("wmr.m_grid[" + std::to_string(i) + "]", "must be a number");
            m.push_back((*g)[i].get<double>());
        }
        c.wmr.m_grid = std::move(m);
    }

    const json& fig = object_at(doc, "figure", "", empty);
    reject_unknown(fig, "figure", {"id", "eval_time", "theta_ratio", "reservoir", "resolution", "t_max", "dt"});
    if (auto id = count_at(fig, "id", "figure")) c.figure.id = static_cast<int>(std::min<std::size_t>(*id, 1000));
    c.figure.eval_time = number_at(fig, "eval_time", "figure");
    c.figure.theta_ratio = number_at(fig, "theta_ratio", "figure");
    c.figure.reservoir = string_at(fig, "reservoir", "figure");
    c.figure.resolution = count_at(fig, "resolution", "figure");
    c.figure.t_max = number_at(fig, "t_max", "figure");
    c.figure.dt = number_at(fig, "dt", "figure");

    c.workers = count_at(doc, "workers", "").value_or(c.workers);
    c.output = string_at(doc, "output", "").value_or(c.output);
    if (const json* j = child(doc, "json")) {
        if (!j->is_boolean()) throw ConfigError("json", "must be a boolean");
        c.json_mirror = j->get<bool>();
    }

    validate(c);
    return c;
}

inline RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("parse error: ") + e.what());
    }
    return config_from_json(doc);
}

// Complete document: every field written, so parsing it reproduces the config.
inline json to_json(const RunConfig& c) {
    json doc;
    doc["task"] = to_string(c.task);
    doc["model"] = {{"omega", c.model.omega},
                    {"theta", c.model.theta},
                    {"reservoir", {{"mode", c.model.memoryless ? "memoryless" : "lorentzian"}, {"gamma", c.model.gamma}}},
                    {"center_frequency", c.model.center_frequency}};
    doc["state"] = {{"theta", c.state.theta_angle}, {"phi", c.state.phi}};
    json grid = {{"t_max", c.grid.t_max}};
    if (c.grid.dt) grid["dt"] = *c.grid.dt;
    if (c.grid.n_points) grid["n_points"] = *c.grid.n_points;
    doc["grid"] = grid;
    doc["method"] = c.method ? to_string(*c.method) : "auto";
    doc["sweep"] = {{"gamma_min", c.sweep.gamma_min}, {"gamma_max", c.sweep.gamma_max}, {"points", c.sweep.points}};
    doc["surface"] = {{"time", c.surface.time},
                      {"theta_points", c.surface.theta_points},
                      {"phi_points", c.surface.phi_points}};
    json wmr = {{"time", c.wmr.time}, {"m_points", c.wmr.m_points}};
    if (c.wmr.m_grid) wmr["m_grid"] = *c.wmr.m_grid;
    doc["wmr"] = wmr;
    json fig = {{"id", c.figure.id}};
    if (c.figure.eval_time) fig["eval_time"] = *c.figure.eval_time;
    if (c.figure.theta_ratio) fig["theta_ratio"] = *c.figure.theta_ratio;
    if (c.figure.reservoir) fig["reservoir"] = *c.figure.reservoir;
    if (c.figure.resolution) fig["resolution"] = *c.figure.resolution;
    if (c.figure.t_max) fig["t_max"] = *c.figure.t_max;
    if (c.figure.dt) fig["dt"] = *c.figure.dt;
    doc["figure"] = fig;
    doc["workers"] = c.workers;
    doc["output"] = c.output;
    doc["json"] = c.json_mirror;
    return doc;
}

inline std::string serialize(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

// `key=value` with a dotted key; the value is read as JSON when it parses
// as JSON, otherwise as a string.
inline void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ConfigError("", "override must look like key=value");
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) throw ConfigError(key, "malformed override key");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        json& next = (*node)[part];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) throw ConfigError(key.substr(0, dot), "is not an object");
        node = &next;
        start = dot + 1;
    }
}

inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Hash of everything that determines the numbers; worker count, output
// path and the JSON mirror flag are excluded.
inline std::string config_hash(const RunConfig& c) {
    json doc = to_json(c);
    doc.erase("workers");
    doc.erase("output");
    doc.erase("json");
    static constexpr char hex[] = "0123456789abcdef";
    std::uint64_t h = fnv1a64(doc.dump());
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    return out;
}

} // namespace nmeur
