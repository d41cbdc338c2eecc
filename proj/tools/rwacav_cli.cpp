// Command-line front end: run presets or config files, sweep mode counts,
// validate configs and run the integrator/oracle equivalence check.
//
// Exit status: 0 ok, 2 bad config, 3 runtime failure, 4 budget refusal,
// 130 interrupted. Failures print one line "error category=<c> ...".

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwacav/config.hpp"
#include "rwacav/experiments.hpp"
#include "rwacav/verification.hpp"

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) { g_cancel.store(true); }

enum Exit : int { kOk = 0, kConfig = 2, kRuntime = 3, kBudget = 4, kInterrupted = 130 };

struct Common {
    std::string config_path;
    std::string scenario;
    double scale = 0.0;
    std::vector<std::string> overrides;
    std::string out_dir;
    int verbosity = 0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("config,-c,--config", c.config_path, "key=value config file");
    sub->add_option("--scenario", c.scenario, "preset: fig1..fig6 or custom");
    sub->add_option("--scale", c.scale, "desk-scale factor in (0,1]");
    sub->add_option("-s,--set", c.overrides, "override, key=value (repeatable)");
    sub->add_option("-o,--out", c.out_dir, "output directory");
    sub->add_flag("-v,--verbose", c.verbosity, "more progress output");
}

std::string key_table() {
    std::ostringstream os;
    os << "\nConfig keys (file or --set key=value):\n";
    for (const auto& k : rwacav::config_keys()) {
        std::string name(k.key);
        name.resize(std::max<std::size_t>(name.size(), 32), ' ');
        os << "  " << name << " [" << k.units << "] " << k.description << '\n';
    }
    return os.str();
}

rwacav::ScenarioConfig load(const Common& c) {
    std::vector<rwacav::ConfigEntry> entries;
    if (const char* env = std::getenv("RWACAV_OUTPUT_DIR"); env && *env)
        entries.push_back({"output.dir", env, "RWACAV_OUTPUT_DIR"});
    if (!c.config_path.empty()) {
        auto file = rwacav::parse_config_file(c.config_path);
        entries.insert(entries.end(), file.begin(), file.end());
    }
    if (!c.scenario.empty()) entries.push_back({"scenario.id", c.scenario, "--scenario"});
    if (c.scale != 0.0) entries.push_back({"scenario.scale", rwacav::csv::format(c.scale), "--scale"});
    for (const auto& o : c.overrides) entries.push_back(rwacav::parse_override(o));
    if (!c.out_dir.empty()) entries.push_back({"output.dir", c.out_dir, "--out"});
    return rwacav::build_scenario(entries);
}

std::string opt(const std::optional<double>& v) { return v ? rwacav::csv::format(*v) : "nan"; }

void print_summary(const rwacav::ScenarioConfig& cfg, const rwacav::RunResult& r) {
    std::cout << "summary scenario=" << rwacav::to_string(cfg.id) << " mode_count=" << r.mode_count
              << " modes=" << r.modes << " steps=" << r.integration.steps
              << " step_size=" << rwacav::csv::format(r.integration.step_size)
              << " max_norm_drift=" << rwacav::csv::format(r.max_norm_drift)
              << " max_energy_drift=" << rwacav::csv::format(r.max_energy_drift)
              << " tail_fraction=" << opt(r.tail ? std::optional<double>(r.tail->tail_fraction) : std::nullopt)
              << " precausal_avg=" << opt(r.precausal_average)
              << " wall_seconds=" << rwacav::csv::format(r.wall_seconds) << '\n';
}

int cmd_run(const Common& c) {
    const auto cfg = load(c);
    rwacav::RunOptions options;
    options.cancel = &g_cancel;
    for (long n : cfg.mode_counts) {
        if (c.verbosity > 0)
            std::cerr << "running " << rwacav::to_string(cfg.id) << " with " << n << " modes (estimate "
                      << cfg.estimated_seconds(n) << " s)\n";
        const auto r = rwacav::run_scenario(cfg, n, options);
        print_summary(cfg, r);
        if (c.verbosity > 0) std::cerr << "wrote " << r.series_path.string() << '\n';
    }
    return kOk;
}

int cmd_sweep(const Common& c) {
    const auto cfg = load(c);
    rwacav::RunOptions options;
    options.cancel = &g_cancel;
    const auto table = rwacav::convergence_study(cfg, cfg.mode_counts, options);
    for (std::size_t i = 0; i < table.rows.size(); ++i) print_summary(cfg, table.runs[i]);
    std::cout << "sweep table=" << table.path.string() << " rows=" << table.rows.size() << '\n';
    return kOk;
}

int cmd_validate(const Common& c) {
    const auto cfg = load(c);
    double estimate = 0.0;
    for (long n : cfg.mode_counts) estimate += cfg.estimated_seconds(n);
    std::cout << "ok scenario=" << rwacav::to_string(cfg.id) << " policy=" << rwacav::to_string(cfg.policy)
              << " runs=" << cfg.mode_counts.size() << " estimated_seconds=" << rwacav::csv::format(estimate)
              << '\n';
    return kOk;
}

int cmd_oracle_check() {
    const auto rep = rwacav::run_oracle_check();
    const bool ok = rep.max_amplitude_error <= rwacav::kOracleCheckTolerance;
    std::cout << "oracle-check max_amplitude_error=" << rwacav::csv::format(rep.max_amplitude_error)
              << " tolerance=" << rwacav::csv::format(rwacav::kOracleCheckTolerance)
              << " rabi_max_error=" << rwacav::csv::format(rep.rabi_max_error)
              << " oracle_norm_drift=" << rwacav::csv::format(rep.oracle_norm_drift)
              << " status=" << (ok ? "pass" : "fail") << '\n';
    return ok ? kOk : kRuntime;
}

std::string one_line(std::string s) {
    for (auto& ch : s)
        if (ch == '\n') ch = ' ';
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-atom cavity emission under the rotating-wave approximation"};
    app.require_subcommand(1);
    app.footer(key_table());

    Common run_opts, sweep_opts, validate_opts;
    auto* run = app.add_subcommand("run", "run a scenario (one integration per mode count)");
    add_common(run, run_opts);
    auto* sweep = app.add_subcommand("sweep", "mode-count convergence study, writes the tail table");
    add_common(sweep, sweep_opts);
    auto* validate = app.add_subcommand("validate", "check a config without running it");
    add_common(validate, validate_opts);
    auto* oracle = app.add_subcommand("oracle-check", "compare the integrator with exact propagation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cout << "error category=usage message=\"" << one_line(e.what()) << "\"\n";
        return kConfig;
    }

    std::signal(SIGINT, on_sigint);
    try {
        if (*run) return cmd_run(run_opts);
        if (*sweep) return cmd_sweep(sweep_opts);
        if (*validate) return cmd_validate(validate_opts);
        if (*oracle) return cmd_oracle_check();
    } catch (const rwacav::ConfigError& e) {
        std::cout << "error category=config key=" << (e.key().empty() ? "-" : e.key()) << " message=\""
                  << one_line(e.what()) << "\"\n";
        return kConfig;
    } catch (const rwacav::BudgetExceeded& e) {
        std::cout << "error category=budget message=\"" << one_line(e.what()) << "\"\n";
        return kBudget;
    } catch (const rwacav::Interrupted& e) {
        std::cout << "error category=interrupted t=" << rwacav::csv::format(e.time()) << '\n';
        return kInterrupted;
    } catch (const rwacav::IntegrationFailure& e) {
        std::cout << "error category=runtime t=" << rwacav::csv::format(e.time()) << " message=\""
                  << one_line(e.what()) << "\"\n";
        return kRuntime;
    } catch (const std::invalid_argument& e) {
        std::cout << "error category=config key=- message=\"" << one_line(e.what()) << "\"\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cout << "error category=runtime message=\"" << one_line(e.what()) << "\"\n";
        return kRuntime;
    }
    return kOk;
}
