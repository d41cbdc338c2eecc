#pragma once

// Scenario presets for the six figure setups, single runs, and mode-count
// sweeps. Everything here is plumbing between model/dynamics/observables and
// the CSV/metadata files.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rwacav/csv.hpp"
#include "rwacav/dynamics.hpp"
#include "rwacav/model.hpp"
#include "rwacav/observables.hpp"
#include "rwacav/state.hpp"

namespace rwacav {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ScenarioId { fig1, fig2, fig3, fig4, fig5, fig6, custom };
enum class ModePolicyKind { symmetric, asymmetric };

[[nodiscard]] inline std::string_view to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::fig1: return "fig1";
        case ScenarioId::fig2: return "fig2";
        case ScenarioId::fig3: return "fig3";
        case ScenarioId::fig4: return "fig4";
        case ScenarioId::fig5: return "fig5";
        case ScenarioId::fig6: return "fig6";
        case ScenarioId::custom: return "custom";
    }
    return "custom";
}

[[nodiscard]] inline ScenarioId parse_scenario_id(std::string_view s) {
    for (auto id : {ScenarioId::fig1, ScenarioId::fig2, ScenarioId::fig3, ScenarioId::fig4, ScenarioId::fig5,
                    ScenarioId::fig6, ScenarioId::custom})
        if (to_string(id) == s) return id;
    throw ConfigError("unknown scenario '" + std::string(s) + "' (expected fig1..fig6 or custom)", "scenario.id");
}

[[nodiscard]] inline std::string_view to_string(ModePolicyKind p) {
    return p == ModePolicyKind::symmetric ? "symmetric" : "asymmetric";
}

[[nodiscard]] inline ModePolicyKind parse_policy(std::string_view s) {
    if (s == "symmetric") return ModePolicyKind::symmetric;
    if (s == "asymmetric") return ModePolicyKind::asymmetric;
    throw ConfigError("unknown mode policy '" + std::string(s) + "' (expected symmetric or asymmetric)",
                      "modes.policy");
}

struct ScenarioConfig {
    ScenarioId id = ScenarioId::custom;
    double scale = 0.2;

    AtomSetup atoms;
    long center_index = 0;  ///< w1 = center_index * pi; 0 derives it from scale

    ModePolicyKind policy = ModePolicyKind::symmetric;
    std::vector<long> mode_counts;  ///< total modes per run (odd for symmetric)
    long lowest_index = 1;          ///< asymmetric lower cut-off

    double phase_per_step = 0.0125;  ///< h * w_max
    double resolution_cap = 0.3;
    int corrector_iterations = 1;
    std::size_t sample_stride = 0;  ///< 0 = auto (about target_rows rows)
    std::size_t target_rows = 2000;
    double t_end = 0.25;

    std::size_t grid_points = 2001;
    double profile_time = 0.25;  ///< negative disables the profile
    double t_causal = 0.5;

    std::filesystem::path output_dir = ".";
    std::string prefix;

    double budget_seconds = 3600.0;
    double cost_per_mode_step = 1.2e-8; ///< seconds per (amplitude x step), for the budget estimate

    /// Center index of the full-size setup scaled down: round(5000 s) + 1.
    [[nodiscard]] static long scaled_center(double scale) { return std::lround(5000.0 * scale) + 1; }

    [[nodiscard]] long resolved_center_index() const {
        return center_index > 0 ? center_index : scaled_center(scale);
    }
    [[nodiscard]] double omega1() const { return static_cast<double>(resolved_center_index()) * std::numbers::pi; }
    [[nodiscard]] Atoms make_atom_triple() const { return make_atoms(omega1(), atoms); }
    [[nodiscard]] bool wants_profile() const { return profile_time >= 0.0; }

    [[nodiscard]] ModeSet mode_set(long count) const {
        if (policy == ModePolicyKind::asymmetric) return asymmetric_mode_set(lowest_index, count);
        if (count < 3 || count % 2 == 0)
            throw ConfigError("symmetric mode count must be odd and >= 3, got " + std::to_string(count),
                              "modes.counts");
        return symmetric_mode_set(resolved_center_index(), (count - 1) / 2);
    }

    [[nodiscard]] CavitySystem system(long count) const { return CavitySystem(make_atom_triple(), mode_set(count)); }

    void validate() const {
        if (!(scale > 0.0 && scale <= 1.0)) throw ConfigError("scale must lie in (0, 1]", "scenario.scale");
        if (mode_counts.empty()) throw ConfigError("at least one mode count is required", "modes.counts");
        if (!(phase_per_step > 0.0)) throw ConfigError("phase_per_step must be > 0", "integrator.phase_per_step");
        if (phase_per_step > resolution_cap)
            throw ConfigError("phase_per_step exceeds resolution_cap", "integrator.phase_per_step");
        if (corrector_iterations < 1)
            throw ConfigError("corrector_iterations must be >= 1", "integrator.corrector_iterations");
        if (target_rows < 1) throw ConfigError("target_rows must be >= 1", "integrator.target_rows");
        if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0", "integrator.t_end");
        if (grid_points < 2) throw ConfigError("grid_points must be >= 2", "observables.grid_points");
        if (wants_profile() && profile_time > t_end)
            throw ConfigError("profile_time exceeds t_end", "observables.profile_time");
        if (!(t_causal > 0.0)) throw ConfigError("t_causal must be > 0", "observables.t_causal");
        if (!(budget_seconds > 0.0)) throw ConfigError("budget_seconds must be > 0", "run.budget_seconds");
        (void)make_atom_triple();
        for (long n : mode_counts) (void)mode_set(n);
    }

    [[nodiscard]] double step_size(const CavitySystem& sys) const {
        return IntegratorConfig::step_for_phase(phase_per_step, sys.max_frequency());
    }

    [[nodiscard]] IntegratorConfig integrator_config(const CavitySystem& sys) const {
        IntegratorConfig cfg;
        cfg.step_size = step_size(sys);
        cfg.corrector_iterations = corrector_iterations;
        cfg.resolution_cap = resolution_cap;
        const std::size_t steps = step_count(0.0, t_end, cfg.step_size);
        cfg.sample_stride = sample_stride > 0 ? sample_stride : std::max<std::size_t>(1, steps / target_rows);
        return cfg;
    }

    /// Wall-clock estimate for one run with `count` modes.
    [[nodiscard]] double estimated_seconds(long count) const {
        const auto sys = system(count);
        const double steps = static_cast<double>(step_count(0.0, t_end, step_size(sys)));
        return cost_per_mode_step * static_cast<double>(sys.dimension()) * steps;
    }
};

/// Preset reproducing one figure setup at a given scale (1 = full size).
[[nodiscard]] inline ScenarioConfig preset(ScenarioId id, double scale = 0.2) {
    ScenarioConfig c;
    c.id = id;
    c.scale = scale;
    const long half = std::lround(5000.0 * scale);
    const long half_small = std::lround(2500.0 * scale);
    const std::vector<long> sym_pair{2 * half_small + 1, 2 * half + 1};
    const std::vector<long> asym_triple{std::lround(10000.0 * scale), std::lround(20000.0 * scale),
                                        std::lround(30000.0 * scale)};
    switch (id) {
        case ScenarioId::fig1:
        case ScenarioId::custom:
            c.policy = ModePolicyKind::symmetric;
            c.mode_counts = {2 * half + 1};
            break;
        case ScenarioId::fig2:
            c.policy = ModePolicyKind::symmetric;
            c.mode_counts = sym_pair;
            break;
        case ScenarioId::fig3:
            c.policy = ModePolicyKind::asymmetric;
            c.mode_counts = asym_triple;
            break;
        case ScenarioId::fig4:
            c.policy = ModePolicyKind::symmetric;
            c.mode_counts = {2 * half + 1};
            break;
        case ScenarioId::fig5:
            c.policy = ModePolicyKind::symmetric;
            c.mode_counts = sym_pair;
            break;
        case ScenarioId::fig6:
            c.policy = ModePolicyKind::asymmetric;
            c.mode_counts = asym_triple;
            break;
    }
    const bool excitation = id == ScenarioId::fig4 || id == ScenarioId::fig5 || id == ScenarioId::fig6;
    c.t_end = excitation ? 0.6 : 0.25;
    c.profile_time = excitation ? -1.0 : 0.25;
    return c;
}

struct RunResult {
    long mode_count = 0;
    std::string modes;
    TrajectoryMetadata integration;
    std::vector<TrajectorySample> samples;
    std::optional<FieldProfile> profile;
    std::optional<TailReport> tail;
    std::optional<double> precausal_average;
    double max_norm_drift = 0.0;    ///< max |norm^2 - norm^2(0)| over samples
    double max_energy_drift = 0.0;  ///< max relative |E - E(0)| over samples
    double wall_seconds = 0.0;
    std::filesystem::path series_path, profile_path, metadata_path;
};

struct RunOptions {
    bool write_files = true;
    const std::atomic<bool>* cancel = nullptr;
};

namespace detail {

inline std::string stem(const ScenarioConfig& c, long count) {
    return c.prefix + std::string(to_string(c.id)) + "_n" + std::to_string(count);
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline void write_profile(const std::filesystem::path& path, const FieldProfile& prof) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << csv::kProfileHeader << '\n';
    for (std::size_t i = 0; i < prof.grid.size(); ++i) csv::write_row(os, prof.grid[i], prof.values[i]);
}

inline void write_metadata(const std::filesystem::path& path, const ScenarioConfig& c, const RunResult& r,
                           bool truncated) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    auto kv = [&](std::string_view k, const auto& v) {
        os << k << '=';
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
            os << csv::format(v);
        else
            os << v;
        os << '\n';
    };
    kv("code_version", kVersion);
    kv("timestamp", utc_timestamp());
    kv("scenario", to_string(c.id));
    kv("scale", c.scale);
    kv("mode_policy", to_string(c.policy));
    kv("mode_count", r.mode_count);
    kv("modes", r.modes);
    kv("center_index", c.resolved_center_index());
    kv("omega1", c.omega1());
    kv("gamma1", c.atoms.decay_rates[0]);
    kv("gamma2", c.atoms.decay_rates[1]);
    kv("gamma3", c.atoms.decay_rates[2]);
    kv("delta", c.atoms.detuning);
    kv("x1", c.atoms.positions[0]);
    kv("x2", c.atoms.positions[1]);
    kv("x3", c.atoms.positions[2]);
    kv("integrator", "adams-bashforth-moulton");
    kv("order", r.integration.order);
    kv("bootstrap", r.integration.bootstrap);
    kv("corrector_iterations", r.integration.corrector_iterations);
    kv("phase_per_step", c.phase_per_step);
    kv("step_size", r.integration.step_size);
    kv("steps", r.integration.steps);
    kv("sample_stride", r.integration.sample_stride);
    kv("t_end", c.t_end);
    kv("grid_points", c.grid_points);
    kv("profile_time", c.profile_time);
    if (r.profile) kv("profile_time_actual", r.profile->t);
    kv("t_causal", c.t_causal);
    kv("max_norm_drift", r.max_norm_drift);
    kv("max_energy_drift", r.max_energy_drift);
    if (r.tail) kv("tail_fraction", r.tail->tail_fraction);
    if (r.precausal_average) kv("precausal_avg", *r.precausal_average);
    kv("wall_seconds", r.wall_seconds);
    kv("truncated", truncated ? "true" : "false");
}

}  // namespace detail

/// Builds the system for `mode_count`, integrates it and evaluates the
/// observables. Writes series/profile/metadata files when requested.
[[nodiscard]] inline RunResult run_scenario(const ScenarioConfig& config, long mode_count,
                                            const RunOptions& options = {}) {
    config.validate();
    const double estimate = config.estimated_seconds(mode_count);
    if (estimate > config.budget_seconds) {
        std::ostringstream os;
        os << "estimated run time " << std::setprecision(3) << estimate << " s for " << mode_count
           << " modes exceeds budget " << config.budget_seconds << " s";
        throw BudgetExceeded(os.str());
    }

    const auto sys = config.system(mode_count);
    const auto icfg = config.integrator_config(sys);

    RunResult result;
    result.mode_count = mode_count;
    result.modes = sys.modes.describe();

    std::ofstream series;
    if (options.write_files) {
        std::filesystem::create_directories(config.output_dir);
        const auto stem = detail::stem(config, mode_count);
        result.series_path = config.output_dir / (stem + "_series.csv");
        result.metadata_path = config.output_dir / (stem + "_meta.txt");
        if (config.wants_profile()) result.profile_path = config.output_dir / (stem + "_profile.csv");
        series.open(result.series_path);
        if (!series) throw std::runtime_error("cannot open " + result.series_path.string());
        series << csv::kSeriesHeader << '\n';
    }

    IntegrationHooks hooks;
    hooks.cancel = options.cancel;
    if (config.wants_profile()) hooks.snapshot_times = {config.profile_time};
    if (options.write_files)
        hooks.on_sample = [&series](const TrajectorySample& s) {
            const auto p = excitation_probabilities(s);
            csv::write_row(series, s.t, p[0], p[1], p[2], s.norm2, s.energy);
        };

    const auto start = std::chrono::steady_clock::now();
    Trajectory traj;
    try {
        traj = integrate(initial_state(sys.modes), sys, icfg, config.t_end, hooks);
    } catch (const Interrupted&) {
        if (options.write_files) {
            series << csv::kTruncatedTrailer << '\n';
            series.flush();
            detail::write_metadata(result.metadata_path, config, result, true);
        }
        throw;
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.integration = traj.metadata;
    result.samples = std::move(traj.samples);

    const double n0 = result.samples.front().norm2;
    const double e0 = result.samples.front().energy;
    for (const auto& s : result.samples) {
        result.max_norm_drift = std::max(result.max_norm_drift, std::abs(s.norm2 - n0));
        result.max_energy_drift = std::max(result.max_energy_drift, std::abs(s.energy - e0) / std::abs(e0));
    }

    if (config.wants_profile()) {
        result.profile = field_profile(traj.snapshots.front(), sys.modes, sys.atoms[0].transition_frequency,
                                       config.grid_points);
        const double x1 = sys.atoms[0].position_fraction;
        if (config.profile_time <= std::min(x1, 1.0 - x1))
            result.tail = tail_fraction(*result.profile, x1, config.profile_time);
    }

    const auto p3 = excitation_series(result.samples, 2);
    const auto in_window = std::count_if(p3.t.begin(), p3.t.end(), [&](double t) { return t < config.t_causal; });
    if (config.t_end >= config.t_causal && in_window >= 2)
        result.precausal_average = precausal_average(p3, config.t_causal);

    if (options.write_files) {
        series.close();
        if (result.profile) detail::write_profile(result.profile_path, *result.profile);
        detail::write_metadata(result.metadata_path, config, result, false);
    }
    return result;
}

/// Runs every mode count in the config.
[[nodiscard]] inline std::vector<RunResult> run_scenario(const ScenarioConfig& config,
                                                         const RunOptions& options = {}) {
    config.validate();
    std::vector<RunResult> out;
    for (long n : config.mode_counts) out.push_back(run_scenario(config, n, options));
    return out;
}

struct ConvergenceRow {
    long mode_count = 0;
    double t = 0.0;  ///< profile time the tail fraction refers to
    double tail_fraction = std::numeric_limits<double>::quiet_NaN();
    double precausal_average = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::vector<RunResult> runs;
    std::filesystem::path path;
};

/// Same physics and metric windows at each mode count; one table row per count.
/// Metrics that the config's windows do not cover are reported as NaN.
[[nodiscard]] inline ConvergenceTable convergence_study(const ScenarioConfig& base, const std::vector<long>& mode_counts,
                                                        const RunOptions& options = {}) {
    if (mode_counts.empty()) throw ConfigError("convergence study needs at least one mode count", "modes.counts");
    ScenarioConfig cfg = base;
    cfg.mode_counts = mode_counts;
    cfg.validate();

    ConvergenceTable table;
    std::ofstream os;
    if (options.write_files) {
        std::filesystem::create_directories(cfg.output_dir);
        table.path = cfg.output_dir / (cfg.prefix + std::string(to_string(cfg.id)) + "_tail.csv");
        os.open(table.path);
        if (!os) throw std::runtime_error("cannot open " + table.path.string());
        os << csv::kTailHeader << '\n';
    }
    for (long n : mode_counts) {
        RunResult run;
        try {
            run = run_scenario(cfg, n, options);
        } catch (const Interrupted&) {
            if (options.write_files) os << csv::kTruncatedTrailer << '\n';
            throw;
        }
        ConvergenceRow row;
        row.mode_count = n;
        row.t = cfg.wants_profile() ? cfg.profile_time : std::numeric_limits<double>::quiet_NaN();
        if (run.tail) row.tail_fraction = run.tail->tail_fraction;
        if (run.precausal_average) row.precausal_average = *run.precausal_average;
        if (options.write_files) {
            csv::write_row(os, row.mode_count, row.t, row.tail_fraction, row.precausal_average);
            os.flush();
        }
        table.rows.push_back(row);
        table.runs.push_back(std::move(run));
    }
    return table;
}

/// Default atoms on 8 modes (indices 2..9) with w1 = 6 pi: small enough for
/// the dense oracle.
[[nodiscard]] inline CavitySystem oracle_test_system() {
    return CavitySystem(make_atoms(6.0 * std::numbers::pi), asymmetric_mode_set(2, 8));
}

/// Atom 1 at x = 1/2 with gamma = 1 on resonance with mode 1 (g = 1); atoms 2
/// and 3 decoupled. p1(t) = cos^2(t).
[[nodiscard]] inline CavitySystem rabi_test_system() {
    AtomSetup setup;
    setup.decay_rates = {1.0, 0.0, 0.0};
    setup.positions = {0.5, 0.25, 0.75};
    setup.detuning = 0.0;
    return CavitySystem(make_atoms(std::numbers::pi, setup), asymmetric_mode_set(1, 1));
}

}  // namespace rwacav
