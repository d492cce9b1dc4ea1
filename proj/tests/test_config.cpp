#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "nmeur/config.hpp"

using namespace nmeur;

namespace {

std::string field_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

} // namespace

TEST(ParseConfig, MinimalDocumentGetsDefaults) {
    const auto c = parse_config("{}");
    EXPECT_EQ(c.task, Task::series);
    EXPECT_EQ(c.grid.t_max, 100.0);
    EXPECT_EQ(c.grid.grid().step, 1e-3);
    EXPECT_EQ(c.grid.grid().size, 100001u);
    EXPECT_EQ(c.model.omega, 1.0);
    EXPECT_EQ(c.model.theta, 1.0);
    EXPECT_FALSE(c.model.memoryless);
    EXPECT_EQ(c.model.gamma, 1.0);
    EXPECT_DOUBLE_EQ(c.state.theta_angle, std::numbers::pi / 4);
    EXPECT_DOUBLE_EQ(c.state.phi, std::numbers::pi / 8);
    EXPECT_FALSE(c.method.has_value());
    EXPECT_EQ(c.workers, 1u);
}

TEST(ParseConfig, ReadsNestedFields) {
    const auto c = parse_config(R"({"task": "wmr-sweep",
        "model": {"omega": 2, "theta": 0.5, "reservoir": {"mode": "memoryless"}},
        "state": {"theta": 1.0, "phi": 0.25}, "grid": {"t_max": 10, "n_points": 11},
        "wmr": {"time": 3, "m_grid": [0, 0.5, 1]}, "workers": 4})");
    EXPECT_EQ(c.task, Task::wmr_sweep);
    EXPECT_EQ(c.model.omega, 2.0);
    EXPECT_TRUE(c.model.memoryless);
    EXPECT_TRUE(c.model.params().is_memoryless());
    EXPECT_EQ(c.grid.grid().size, 11u);
    EXPECT_EQ(c.wmr.grid(), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(c.workers, 4u);
}

TEST(ParseConfig, NonPositiveLorentzianWidthNamesField) {
    EXPECT_EQ(field_of(R"({"model": {"reservoir": {"mode": "lorentzian", "gamma": 0}}})"), "model.reservoir.gamma");
    EXPECT_EQ(field_of(R"({"model": {"reservoir": {"gamma": -2}}})"), "model.reservoir.gamma");
    // The width is not used by the memoryless reservoir.
    EXPECT_NO_THROW(parse_config(R"({"model": {"reservoir": {"mode": "memoryless", "gamma": -2}}})"));
}

TEST(ParseConfig, FigureIdOutOfRange) {
    EXPECT_EQ(field_of(R"({"task": "figure", "figure": {"id": 9}})"), "figure.id");
    EXPECT_EQ(field_of(R"({"task": "figure", "figure": {"id": 1}})"), "figure.id");
    EXPECT_EQ(field_of(R"({"task": "figure"})"), "figure.id");
    for (int id = 2; id <= 8; ++id)
        EXPECT_NO_THROW(parse_config(R"({"task": "figure", "figure": {"id": )" + std::to_string(id) + "}}"));
}

TEST(ParseConfig, ValidationErrors) {
    EXPECT_EQ(field_of(R"({"wmr": {"m_grid": [0, 1.5]}})"), "wmr.m_grid[1]");
    EXPECT_EQ(field_of(R"({"model": {"omega": 0}})"), "model.omega");
    EXPECT_EQ(field_of(R"({"model": {"theta": -1}})"), "model.theta");
    EXPECT_EQ(field_of(R"({"grid": {"dt": 0}})"), "grid.dt");
    EXPECT_EQ(field_of(R"({"grid": {"dt": 0.1, "n_points": 5}})"), "grid");
    EXPECT_EQ(field_of(R"({"grid": {"n_points": 1}})"), "grid.n_points");
    EXPECT_EQ(field_of(R"({"sweep": {"gamma_min": 5, "gamma_max": 1}})"), "sweep.gamma_max");
    EXPECT_EQ(field_of(R"({"method": "analytic", "model": {"reservoir": {"mode": "memoryless"}}})"), "method");
    EXPECT_EQ(field_of(R"({"method": "exact"})"), "method");
    EXPECT_EQ(field_of(R"({"workers": 0})"), "workers");
    EXPECT_EQ(field_of(R"({"task": "plot"})"), "task");
    EXPECT_EQ(field_of(R"({"figure": {"id": 2, "reservoir": "lorentzian"}})"), "figure.reservoir");
}

TEST(ParseConfig, TypeErrors) {
    EXPECT_EQ(field_of(R"({"model": {"omega": "fast"}})"), "model.omega");
    EXPECT_EQ(field_of(R"({"model": 3})"), "model");
    EXPECT_EQ(field_of(R"({"sweep": {"points": 2.5}})"), "sweep.points");
    EXPECT_EQ(field_of(R"({"json": 1})"), "json");
}

TEST(ParseConfig, UnknownFieldsRejected) {
    EXPECT_EQ(field_of(R"({"colour": "red"})"), "colour");
    EXPECT_EQ(field_of(R"({"model": {"omegaa": 1}})"), "model.omegaa");
    EXPECT_EQ(field_of(R"({"model": {"reservoir": {"width": 1}}})"), "model.reservoir.width");
}

TEST(ParseConfig, MalformedDocument) {
    EXPECT_THROW(parse_config("{\"task\": "), ConfigError);
    EXPECT_EQ(field_of("{\"task\": "), "");
    EXPECT_EQ(field_of("[1, 2]"), "");
}

TEST(Serialize, RoundTripDefaults) {
    const auto c = parse_config("{}");
    EXPECT_EQ(parse_config(serialize(c)), c);
}

TEST(Serialize, RoundTripAllFields) {
    RunConfig c;
    c.task = Task::figure;
    c.model = {0.3, 1.0 / 3.0, false, 7.25, 0.1};
    c.state = {0.1, 2.9};
    c.grid = {50.0, std::nullopt, 501};
    c.method = GammaMethod::oracle;
    c.sweep = {0.2, 20.0, 7};
    c.surface = {4.0, 9, 11};
    c.wmr.time = 2.0;
    c.wmr.m_grid = std::vector<double>{0.0, 0.123456789012345678, 1.0};
    c.figure.id = 6;
    c.figure.eval_time = 12.5;
    c.figure.theta_ratio = 0.15;
    c.figure.reservoir = "lorentzian";
    c.figure.resolution = 21;
    c.workers = 3;
    c.output = "out/dir";
    c.json_mirror = true;
    const auto back = parse_config(serialize(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(serialize(back), serialize(c));
}

TEST(ApplyOverride, SetsNestedValues) {
    json doc = json::object();
    apply_override(doc, "model.reservoir.gamma=2.5");
    apply_override(doc, "model.reservoir.mode=memoryless");
    apply_override(doc, "wmr.m_grid=[0,0.5]");
    apply_override(doc, "task=wmr-sweep");
    const auto c = config_from_json(doc);
    EXPECT_EQ(c.model.gamma, 2.5);
    EXPECT_TRUE(c.model.memoryless);
    EXPECT_EQ(c.wmr.grid().size(), 2u);
    EXPECT_EQ(c.task, Task::wmr_sweep);
}

TEST(ApplyOverride, Malformed) {
    json doc = json::object();
    EXPECT_THROW(apply_override(doc, "model.theta"), ConfigError);
    EXPECT_THROW(apply_override(doc, "=3"), ConfigError);
    EXPECT_THROW(apply_override(doc, "model..theta=1"), ConfigError);
    doc["model"] = 3;
    EXPECT_THROW(apply_override(doc, "model.theta=1"), ConfigError);
}

TEST(ConfigHash, IgnoresExecutionOnlyFields) {
    auto a = parse_config("{}");
    auto b = a;
    b.workers = 8;
    b.output = "elsewhere.csv";
    b.json_mirror = true;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.model.theta = 2.0;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Fnv1a, KnownVectors) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}
