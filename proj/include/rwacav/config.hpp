#pragma once

// Flat key=value configuration. Lines look like
//
//   # comment
//   [atoms]
//   gamma3 = 256
//   modes.counts = 1001, 2001
//
// A `[section]` header prefixes following bare keys with "section.". Keys are
// applied in order; unknown keys are errors.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rwacav/errors.hpp"
#include "rwacav/experiments.hpp"

namespace rwacav {

struct ConfigEntry {
    std::string key;
    std::string value;
    std::string origin;  ///< "file:line" or "override"
};

struct KeySpec {
    std::string_view key;
    std::string_view units;
    std::string_view description;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + std::string(text) + "'",
                          std::string(key));
    return v;
}

inline long parse_long(std::string_view key, std::string_view text) {
    text = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(text) + "'",
                          std::string(key));
    return v;
}

inline std::size_t parse_count(std::string_view key, std::string_view text) {
    const long v = parse_long(key, text);
    if (v < 0) throw ConfigError("key '" + std::string(key) + "' must be >= 0", std::string(key));
    return static_cast<std::size_t>(v);
}

inline std::vector<long> parse_long_list(std::string_view key, std::string_view text) {
    std::vector<long> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_long(key, item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)>;

struct KeyHandler {
    KeySpec spec;
    Setter set;
};

template <typename F>
KeyHandler real_key(std::string_view k, std::string_view units, std::string_view desc, F member) {
    return {{k, units, desc}, [member](ScenarioConfig& c, std::string_view key, std::string_view v) {
                member(c) = parse_double(key, v);
            }};
}

inline const std::vector<KeyHandler>& key_handlers() {
    static const std::vector<KeyHandler> handlers = [] {
        std::vector<KeyHandler> h;
        h.push_back({{"scenario.id", "-", "preset: fig1..fig6 or custom (applied before all other keys)"},
                     [](ScenarioConfig&, std::string_view, std::string_view) {}});
        h.push_back({{"scenario.scale", "-", "desk-scale factor in (0,1] for mode counts and center index"},
                     [](ScenarioConfig&, std::string_view, std::string_view) {}});
        for (int j = 1; j <= 3; ++j) {
            const auto idx = static_cast<std::size_t>(j - 1);
            static const std::string_view gk[] = {"atoms.gamma1", "atoms.gamma2", "atoms.gamma3"};
            static const std::string_view xk[] = {"atoms.x1", "atoms.x2", "atoms.x3"};
            h.push_back(real_key(gk[idx], "c/L", "decay rate gamma_j = |Omega_j|^2",
                                 [idx](ScenarioConfig& c) -> double& { return c.atoms.decay_rates[idx]; }));
            h.push_back(real_key(xk[idx], "L", "atom position x_j in (0,1)",
                                 [idx](ScenarioConfig& c) -> double& { return c.atoms.positions[idx]; }));
        }
        h.push_back(real_key("atoms.delta", "rad c/L", "detuning w1 - w2 (w3 = w1)",
                             [](ScenarioConfig& c) -> double& { return c.atoms.detuning; }));
        h.push_back({{"atoms.center_index", "-", "w1 = center_index * pi; 0 derives round(5000*scale)+1"},
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.center_index = parse_long(k, v);
                         if (c.center_index < 0) throw ConfigError("center_index must be >= 0", std::string(k));
                     }});
        h.push_back({{"modes.policy", "-", "symmetric (around w1) or asymmetric (fixed lower cut-off)"},
                     [](ScenarioConfig& c, std::string_view, std::string_view v) { c.policy = parse_policy(trim(v)); }});
        h.push_back({{"modes.counts", "modes", "comma-separated total mode counts, one run each"},
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.mode_counts = parse_long_list(k, v);
                     }});
        h.push_back({{"modes.lowest_index", "-", "lowest mode index n for the asymmetric policy"},
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.lowest_index = parse_long(k, v);
                     }});
        h.push_back(real_key("integrator.phase_per_step", "rad", "h * w_max; sets the step size",
                             [](ScenarioConfig& c) -> double& { return c.phase_per_step; }));
        h.push_back(real_key("integrator.resolution_cap", "rad", "largest h * w_max accepted",
                             [](ScenarioConfig& c) -> double& { return c.resolution_cap; }));
        h.push_back({{"integrator.corrector_iterations", "-", "Adams-Moulton corrector passes per step (1 = PECE)"},
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.corrector_iterations = static_cast<int>(parse_long(k, v));
                     }});
        h.push_back({{"integrator.sample_stride", "steps", "store every k-th step; 0 = auto"},
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.sample_stride = parse_count(k, v);
                     }});
        h.push_back({{"integrator.target_rows", "rows", "approximate series length when sample_stride = 0"},
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.target_rows = parse_count(k, v);
                     }});
        h.push_back(real_key("integrator.t_end", "L/c", "final time",
                             [](ScenarioConfig& c) -> double& { return c.t_end; }));
        h.push_back({{"observables.grid_points", "points", "uniform field-profile grid over [0,1]"},
                     [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                         c.grid_points = parse_count(k, v);
                     }});
        h.push_back(real_key("observables.profile_time", "L/c", "field profile time; negative disables",
                             [](ScenarioConfig& c) -> double& { return c.profile_time; }));
        h.push_back(real_key("observables.t_causal", "L/c", "end of the pre-causal window for p3",
                             [](ScenarioConfig& c) -> double& { return c.t_causal; }));
        h.push_back({{"output.dir", "path", "output directory (default $RWACAV_OUTPUT_DIR or .)"},
                     [](ScenarioConfig& c, std::string_view, std::string_view v) { c.output_dir = std::string(trim(v)); }});
        h.push_back({{"output.prefix", "-", "file name prefix"},
                     [](ScenarioConfig& c, std::string_view, std::string_view v) { c.prefix = std::string(trim(v)); }});
        h.push_back(real_key("run.budget_seconds", "s", "refuse runs whose estimate exceeds this",
                             [](ScenarioConfig& c) -> double& { return c.budget_seconds; }));
        h.push_back(real_key("run.cost_per_mode_step", "s", "cost model for the budget estimate",
                             [](ScenarioConfig& c) -> double& { return c.cost_per_mode_step; }));
        return h;
    }();
    return handlers;
}

inline const KeyHandler* find_handler(std::string_view key) {
    const auto& hs = key_handlers();
    const auto it = std::find_if(hs.begin(), hs.end(), [&](const KeyHandler& h) { return h.spec.key == key; });
    return it == hs.end() ? nullptr : &*it;
}

}  // namespace detail

/// Every accepted key with its units, in help order.
[[nodiscard]] inline std::vector<KeySpec> config_keys() {
    std::vector<KeySpec> out;
    for (const auto& h : detail::key_handlers()) out.push_back(h.spec);
    return out;
}

[[nodiscard]] inline std::vector<ConfigEntry> parse_config_text(std::string_view text, std::string_view origin = "config") {
    std::vector<ConfigEntry> out;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
        std::string key(detail::trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        out.push_back({key, std::string(detail::trim(line.substr(eq + 1))), where});
    }
    return out;
}

[[nodiscard]] inline std::vector<ConfigEntry> parse_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

/// "key=value" from the command line.
[[nodiscard]] inline ConfigEntry parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(text) + "' is not key=value");
    return {std::string(detail::trim(text.substr(0, eq))), std::string(detail::trim(text.substr(eq + 1))), "override"};
}

/// Preset chosen by scenario.id / scenario.scale, then every other entry in order.
[[nodiscard]] inline ScenarioConfig build_scenario(const std::vector<ConfigEntry>& entries) {
    ScenarioId id = ScenarioId::custom;
    double scale = 0.2;
    for (const auto& e : entries) {
        if (!detail::find_handler(e.key))
            throw ConfigError(e.origin + ": unknown config key '" + e.key + "'", e.key);
        if (e.key == "scenario.id") id = parse_scenario_id(detail::trim(e.value));
        if (e.key == "scenario.scale") scale = detail::parse_double(e.key, e.value);
    }
    if (!(scale > 0.0 && scale <= 1.0)) throw ConfigError("scale must lie in (0, 1]", "scenario.scale");
    ScenarioConfig cfg = preset(id, scale);
    for (const auto& e : entries) detail::find_handler(e.key)->set(cfg, e.key, e.value);
    cfg.validate();
    return cfg;
}

}  // namespace rwacav
