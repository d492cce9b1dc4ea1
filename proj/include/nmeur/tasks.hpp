// tasks.hpp: sweeps and figure tables computed from a RunConfig.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "nmeur/config.hpp"
#include "nmeur/dynamics.hpp"
#include "nmeur/errors.hpp"
#include "nmeur/model.hpp"
#include "nmeur/nonmarkov.hpp"
#include "nmeur/propagator.hpp"
#include "nmeur/uncertainty.hpp"
#include "nmeur/wmr.hpp"

namespace nmeur {

// One CSV file: '#' metadata lines, a header row, numeric rows.
struct Table {
    std::string name;  // file stem
    std::vector<std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// f(0) .. f(n-1) on up to `workers` threads; results land by index, so the
// output does not depend on scheduling. The lowest-index exception wins.
template <class F>
auto parallel_map(std::size_t n, std::size_t workers, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), n);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1) v.back() = b;
    return v;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
    if (n > 1) v.back() = b;
    return v;
}

// 17 significant digits, '.' decimal point, independent of the locale.
inline std::string format_number(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

namespace detail {

inline std::string meta_param(const char* key, double value, bool overridden) {
    return std::string(overridden ? "override: " : "default: ") + key + "=" + format_number(value);
}

inline PropagatorCurve curve_for(const RunConfig& c, const TimeGrid& grid) {
    const auto params = c.model.params();
    return c.method ? gamma_curve(grid, params, *c.method) : gamma_curve(grid, params);
}

inline std::vector<std::string> model_meta(const RunConfig& c) {
    std::vector<std::string> m{"theta_over_omega=" + format_number(c.model.theta / c.model.omega)};
    m.push_back(c.model.memoryless ? std::string("reservoir=memoryless")
                                   : "reservoir=lorentzian gamma_over_omega=" + format_number(c.model.gamma / c.model.omega));
    return m;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Generic tasks

inline Table task_gamma_curve(const RunConfig& c) {
    const auto curve = detail::curve_for(c, c.grid.grid());
    Table t{"gamma-curve", detail::model_meta(c), {"t", "gamma"}, {}};
    t.meta.push_back("method=" + to_string(curve.method) + (curve.degenerate_fallback ? " (degenerate fallback)" : ""));
    for (std::size_t i = 0; i < curve.size(); ++i) t.rows.push_back({curve.time(i), curve.values[i]});
    return t;
}

inline Table task_series(const RunConfig& c) {
    const auto curve = detail::curve_for(c, c.grid.grid());
    const auto rho0 = pure_state_from_angles(c.state);
    Table t{"series", detail::model_meta(c), {"t", "gamma", "D", "purity", "S_xz", "B_CP"}, {}};
    t.meta.push_back("state theta=" + format_number(c.state.theta_angle) + " phi=" + format_number(c.state.phi));
    for (const auto& r : records_from_curve(curve, rho0))
        t.rows.push_back({r.t, r.gamma_value, r.distance, r.purity, r.entropic_sum, r.bounds.cp});
    return t;
}

inline Table task_nonmarkov_sweep(const RunConfig& c) {
    if (c.model.memoryless)
        throw ConfigError("model.reservoir.mode", "nonmarkov-sweep varies gamma and needs a lorentzian reservoir");
    const auto grid = c.grid.grid();
    if (!(grid.step <= 1e-2)) throw ConfigError("grid", "nonmarkov-sweep needs a time step <= 1e-2");
    auto ratios = logspace(c.sweep.gamma_min, c.sweep.gamma_max, c.sweep.points);
    std::sort(ratios.begin(), ratios.end());
    const auto values = parallel_map(ratios.size(), c.workers, [&](std::size_t i) {
        RunConfig point = c;
        point.model.gamma = ratios[i] * c.model.omega;
        const auto r = non_markovianity(detail::curve_for(point, grid));
        return std::pair{r.n_value, r.tail_estimate};
    });
    Table t{"nonmarkov-sweep", detail::model_meta(c), {"gamma_over_omega", "N", "tail"}, {}};
    t.meta[1] = "reservoir=lorentzian (gamma swept)";
    t.meta.push_back("t_max=" + format_number(grid.back()) + " dt=" + format_number(grid.step));
    for (std::size_t i = 0; i < ratios.size(); ++i) t.rows.push_back({ratios[i], values[i].first, values[i].second});
    return t;
}

inline std::vector<std::vector<double>> surface_rows(double gamma_value, std::size_t theta_points,
                                                     std::size_t phi_points, std::size_t workers) {
    const auto thetas = linspace(0.0, std::numbers::pi / 2, theta_points);
    const auto phis = linspace(0.0, std::numbers::pi, phi_points);
    const auto blocks = parallel_map(thetas.size(), workers, [&](std::size_t i) {
        std::vector<std::vector<double>> rows;
        for (double phi : phis) {
            const auto rho = evolve(pure_state_from_angles({thetas[i], phi}), gamma_value);
            rows.push_back({thetas[i], phi, entropic_sum_xz(rho)});
        }
        return rows;
    });
    std::vector<std::vector<double>> rows;
    for (const auto& b : blocks) rows.insert(rows.end(), b.begin(), b.end());
    return rows;
}

inline Table task_uncertainty_surface(const RunConfig& c) {
    const double g = gamma_at(c.surface.time, c.model.params());
    Table t{"uncertainty-surface", detail::model_meta(c), {"theta", "phi", "S_xz"}, {}};
    t.meta.push_back("omega_t=" + format_number(c.surface.time));
    t.rows = surface_rows(g, c.surface.theta_points, c.surface.phi_points, c.workers);
    return t;
}

inline Table task_wmr_sweep(const RunConfig& c) {
    Table t{"wmr-sweep", detail::model_meta(c), {"m", "S_xz"}, {}};
    t.meta.push_back("omega_t=" + format_number(c.wmr.time));
    for (const auto& p : wmr_uncertainty_sweep(c.model.params(), c.state, c.wmr.time, c.wmr.grid()))
        t.rows.push_back({p.m, p.entropic_sum});
    return t;
}

// ---------------------------------------------------------------------------
// Figures. Every figure works in units of Omega: abscissae are Omega t,
// gamma/Omega, Omega/Theta; fig. 8 uses (Theta t, Omega t) directly.

namespace figures {

inline constexpr double kPi = std::numbers::pi;

struct Settings {
    const RunConfig& c;
    std::vector<std::string> meta;

    double param(const char* key, const std::optional<double>& v, double fallback) {
        meta.push_back(detail::meta_param(key, v.value_or(fallback), v.has_value()));
        return v.value_or(fallback);
    }
    std::size_t count(const char* key, const std::optional<std::size_t>& v, std::size_t fallback) {
        meta.push_back(detail::meta_param(key, static_cast<double>(v.value_or(fallback)), v.has_value()));
        return v.value_or(fallback);
    }
    bool memoryless(bool fallback) {
        const bool m = c.figure.reservoir ? *c.figure.reservoir == "memoryless" : fallback;
        meta.push_back(std::string(c.figure.reservoir ? "override: " : "default: ") +
                       "reservoir=" + (m ? "memoryless" : "lorentzian"));
        if (!m) meta.push_back("gamma_over_omega=" + format_number(c.model.gamma / c.model.omega) + " (from model)");
        return m;
    }
    TimeGrid time_grid(double t_max, double dt) {
        return TimeGrid::stepped(param("t_max", c.figure.t_max, t_max), param("dt", c.figure.dt, dt));
    }
    Table table(std::string name, std::vector<std::string> columns, std::vector<std::string> extra = {}) {
        Table t{std::move(name), meta, std::move(columns), {}};
        t.meta.insert(t.meta.end(), extra.begin(), extra.end());
        return t;
    }
};

inline std::vector<Table> figure2(const RunConfig& c) {
    Settings s{c, {"state theta=pi/4 phi=pi/8", "theta_over_omega=1",
                   "scale: Omega = Theta = pi x 1e6 (absolute scale is metadata only)"}};
    const auto grid = s.time_grid(40.0, 1e-2);
    const double ratios[] = {1000.0, 1.0};
    const auto panels = parallel_map(2, c.workers, [&](std::size_t k) {
        return time_series(ModelParams::lorentzian(1.0, 1.0, ratios[k]), {kPi / 4, kPi / 8}, grid);
    });
    std::vector<Table> out;
    for (std::size_t k = 0; k < 2; ++k) {
        auto t = s.table(k == 0 ? "figure2a" : "figure2b", {"Omega_t", "D", "S_xz"},
                         {"gamma_over_omega=" + format_number(ratios[k])});
        for (const auto& r : panels[k]) t.rows.push_back({r.t, r.distance, r.entropic_sum});
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Table> figure3(const RunConfig& c) {
    Settings s{c, {"theta_over_omega in {0.1, 1, 5}"}};
    const std::size_t n = s.count("resolution", c.figure.resolution, 30);
    const double t_max = s.param("t_max", c.figure.t_max, kDefaultNonMarkovTMax);
    const double dt = s.param("dt", c.figure.dt, kDefaultNonMarkovDt);
    const auto ratios = logspace(0.1, 100.0, n);
    const double thetas[] = {0.1, 1.0, 5.0};
    const auto n_values = parallel_map(3 * n, c.workers, [&](std::size_t k) {
        return non_markovianity(ModelParams::lorentzian(1.0, thetas[k / n], ratios[k % n]), t_max, dt).n_value;
    });
    auto t = s.table("figure3", {"gamma_over_omega", "N_theta0.1", "N_theta1", "N_theta5"});
    for (std::size_t i = 0; i < n; ++i) t.rows.push_back({ratios[i], n_values[i], n_values[n + i], n_values[2 * n + i]});
    return {t};
}

inline std::vector<Table> figure4(const RunConfig& c) {
    Settings s{c, {"state theta=pi/3 phi=pi/6 (D of the optimal pair does not depend on it)", "reservoir=memoryless"}};
    const double thetas[] = {0.5, 1.0, 5.0, 10.0};
    const std::size_t n = s.count("resolution", c.figure.resolution, 96);
    const auto grid = s.time_grid(40.0, 1e-2);
    const auto curves = parallel_map(4, c.workers, [&](std::size_t k) {
        return gamma_memoryless_curve(grid, ModelParams::memoryless(1.0, thetas[k]));
    });
    auto a = s.table("figure4a", {"Omega_t", "D_theta0.5", "D_theta1", "D_theta5", "D_theta10"});
    for (std::size_t i = 0; i < grid.size; ++i) {
        std::vector<double> row{grid.at(i)};
        for (const auto& cv : curves) row.push_back(optimal_pair_distance(cv.values[i]));
        a.rows.push_back(std::move(row));
    }

    const auto ratios = linspace(0.05, 1.0, n);  // Omega / Theta
    const auto n_values = parallel_map(n, c.workers, [&](std::size_t i) {
        return non_markovianity(ModelParams::memoryless(ratios[i], 1.0)).n_value;
    });
    auto b = s.table("figure4b", {"Omega_over_Theta", "N"},
                     {"N: t_max=" + format_number(kDefaultNonMarkovTMax) + " dt=" + format_number(kDefaultNonMarkovDt) +
                      " in units of 1/Omega"});
    for (std::size_t i = 0; i < n; ++i) b.rows.push_back({ratios[i], n_values[i]});
    return {a, b};
}

inline std::vector<Table> figure5(const RunConfig& c) {
    Settings s{c, {"state theta=pi/3 phi=pi/6", "reservoir=memoryless"}};
    const auto grid = s.time_grid(40.0, 1e-2);
    const double thetas[] = {0.5, 1.0, 5.0, 10.0};
    const auto panels = parallel_map(4, c.workers, [&](std::size_t k) {
        return time_series(ModelParams::memoryless(1.0, thetas[k]), {kPi / 3, kPi / 6}, grid);
    });
    std::vector<Table> out;
    const char* names[] = {"figure5a", "figure5b", "figure5c", "figure5d"};
    for (std::size_t k = 0; k < 4; ++k) {
        auto t = s.table(names[k], {"Omega_t", "S_xz", "P"}, {"theta_over_omega=" + format_number(thetas[k])});
        for (const auto& r : panels[k]) t.rows.push_back({r.t, r.entropic_sum, r.purity});
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Table> figure6(const RunConfig& c) {
    Settings s{c, {"theta in [0, pi/2], phi in [0, pi]"}};
    const double t = s.param("eval_time", c.figure.eval_time, 10.0);
    const double ratio = s.param("theta_ratio", c.figure.theta_ratio, 0.15);
    const std::size_t n = s.count("resolution", c.figure.resolution, 41);
    const bool memoryless = s.memoryless(true);
    const auto params = memoryless ? ModelParams::memoryless(1.0, ratio)
                                   : ModelParams::lorentzian(1.0, ratio, c.model.gamma / c.model.omega);
    auto table = s.table("figure6", {"theta", "phi", "S_xz"});
    table.rows = surface_rows(gamma_at(t, params), n, n, c.workers);
    return {table};
}

inline std::vector<Table> figure7(const RunConfig& c) {
    Settings s{c, {"state theta=pi/3 phi=pi/6", "(Omega, Theta) in {(0.1, 3), (1, 3), (10, 3), (20, 3)}"}};
    const double t = s.param("eval_time", c.figure.eval_time, 10.0);
    const std::size_t n = s.count("resolution", c.figure.resolution, 100);
    const bool memoryless = s.memoryless(true);
    const std::pair<double, double> pairs[] = {{0.1, 3.0}, {1.0, 3.0}, {10.0, 3.0}, {20.0, 3.0}};
    const auto m = linspace(0.0, 1.0, n);
    const auto sweeps = parallel_map(4, c.workers, [&](std::size_t k) {
        const auto [omega, theta] = pairs[k];
        const auto params =
            memoryless ? ModelParams::memoryless(omega, theta) : ModelParams::lorentzian(omega, theta, c.model.gamma);
        return wmr_uncertainty_sweep(params, {kPi / 3, kPi / 6}, t, m);
    });
    auto table = s.table("figure7", {"m", "S_xz_omega0.1_theta3", "S_xz_omega1_theta3", "S_xz_omega10_theta3",
                                     "S_xz_omega20_theta3"});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row{m[i]};
        for (const auto& sw : sweeps) row.push_back(sw[i].entropic_sum);
        table.rows.push_back(std::move(row));
    }
    return {table};
}

inline std::vector<Table> figure8(const RunConfig& c) {
    Settings s{c, {"state theta=pi/5 phi=pi/3", "reservoir=memoryless"}};
    const double range = s.param("t_max", c.figure.t_max, 10.0);
    const std::size_t n = s.count("resolution", c.figure.resolution, 51);
    const auto axis = linspace(0.0, range, n);
    const auto rho0 = pure_state_from_angles({kPi / 5, kPi / 3});
    const double strengths[] = {0.0, 0.5};
    std::vector<Table> out;
    for (std::size_t k = 0; k < 2; ++k) {
        const WmrStrength m(strengths[k]);
        const auto blocks = parallel_map(n, c.workers, [&](std::size_t i) {
            std::vector<std::vector<double>> rows;
            for (double omega_t : axis) {
                // The memoryless Gamma depends on (Theta t, Omega t) only.
                const double g = gamma_memoryless(1.0, omega_t, axis[i]);
                rows.push_back({axis[i], omega_t, entropic_sum_xz(apply_wmr(evolve(rho0, g), m))});
            }
            return rows;
        });
        auto t = s.table(k == 0 ? "figure8a" : "figure8b", {"Theta_t", "Omega_t", "S_xz"},
                         {"m=" + format_number(strengths[k])});
        for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace figures

inline std::vector<Table> reproduce_figure(const RunConfig& c) {
    std::vector<Table> tables;
    switch (c.figure.id) {
    case 2: tables = figures::figure2(c); break;
    case 3: tables = figures::figure3(c); break;
    case 4: tables = figures::figure4(c); break;
    case 5: tables = figures::figure5(c); break;
    case 6: tables = figures::figure6(c); break;
    case 7: tables = figures::figure7(c); break;
    case 8: tables = figures::figure8(c); break;
    default: throw ConfigError("figure.id", "figures 2-8 only, got " + std::to_string(c.figure.id));
    }
    for (auto& t : tables) t.meta.insert(t.meta.begin(), "figure=" + std::to_string(c.figure.id));
    return tables;
}

inline std::vector<Table> run_task(const RunConfig& c) {
    switch (c.task) {
    case Task::gamma_curve: return {task_gamma_curve(c)};
    case Task::series: return {task_series(c)};
    case Task::nonmarkov_sweep: return {task_nonmarkov_sweep(c)};
    case Task::uncertainty_surface: return {task_uncertainty_surface(c)};
    case Task::wmr_sweep: return {task_wmr_sweep(c)};
    case Task::figure: return reproduce_figure(c);
    }
    throw ConfigError("task", "unknown task");
}

} // namespace nmeur
