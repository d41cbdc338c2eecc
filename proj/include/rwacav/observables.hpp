#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rwacav/dynamics.hpp"
#include "rwacav/model.hpp"
#include "rwacav/state.hpp"

namespace rwacav {

/// <E^2(x,t)> = 2 w1 |sum_n b_n sin(n pi x)|^2 with L = 1, zero-point part dropped.
[[nodiscard]] inline double field_energy_density(std::span<const cplx> b, const ModeSet& modes, double x,
                                                 double omega1) {
    if (b.size() != modes.size()) throw DimensionMismatch("field amplitudes do not match the mode set");
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("field position must lie in [0, 1]");
    double re = 0.0, im = 0.0;
    const auto idx = modes.indices();
    for (std::size_t k = 0; k < b.size(); ++k) {
        const double s = sin_pi(static_cast<double>(idx[k]) * x);
        re += b[k].real() * s;
        im += b[k].imag() * s;
    }
    return 2.0 * omega1 * (re * re + im * im);
}

[[nodiscard]] inline double field_energy_density(const AmplitudeState& s, double x, const ModeSet& modes,
                                                 double omega1) {
    return field_energy_density(s.b(), modes, x, omega1);
}

struct FieldProfile {
    double t = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
};

/// Uniform grid over [0, 1], endpoints included.
[[nodiscard]] inline std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) throw ConfigError("profile grid needs at least 2 points", "observables.grid_points");
    std::vector<double> x(points);
    const double denom = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) x[i] = static_cast<double>(i) / denom;
    return x;
}

/// Field energy density on a uniform grid. Each point is one fused pass over
/// the modes; sin(n pi x) comes from a rotation recurrence reseeded every
/// `kReseed` modes to bound drift.
[[nodiscard]] inline FieldProfile field_profile(const AmplitudeState& s, const ModeSet& modes, double omega1,
                                                std::size_t grid_points) {
    if (s.mode_count() != modes.size()) throw DimensionMismatch("field amplitudes do not match the mode set");
    constexpr std::size_t kReseed = 64;
    FieldProfile prof;
    prof.t = s.t;
    prof.grid = uniform_grid(grid_points);
    prof.values.resize(grid_points);
    const auto b = s.b();
    const auto idx = modes.indices();
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = prof.grid[i];
        if (i == 0 || i + 1 == grid_points) {
            prof.values[i] = 0.0;  // walls are nodes of every mode
            continue;
        }
        const double cd = std::cos(std::numbers::pi * x), sd = std::sin(std::numbers::pi * x);
        double re = 0.0, im = 0.0, sn = 0.0, cn = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (k % kReseed == 0) {
                sn = sin_pi(static_cast<double>(idx[k]) * x);
                cn = sin_pi(static_cast<double>(idx[k]) * x + 0.5);
            } else {
                const double next_s = sn * cd + cn * sd;
                cn = cn * cd - sn * sd;
                sn = next_s;
            }
            re += b[k].real() * sn;
            im += b[k].imag() * sn;
        }
        prof.values[i] = 2.0 * omega1 * (re * re + im * im);
    }
    return prof;
}

/// p_j = |c_j|^2.
[[nodiscard]] inline std::array<double, kAtomCount> excitation_probabilities(const AmplitudeState& s) {
    return {std::norm(s.c(0)), std::norm(s.c(1)), std::norm(s.c(2))};
}

[[nodiscard]] inline std::array<double, kAtomCount> excitation_probabilities(const TrajectorySample& s) {
    return {std::norm(s.c[0]), std::norm(s.c[1]), std::norm(s.c[2])};
}

struct TailReport {
    double inside_weight = 0.0;
    double outside_weight = 0.0;
    double tail_fraction = 0.0;
    double source_x = 0.0;
    double t = 0.0;
};

/// Splits grid weight into the light cone [source_x - t, source_x + t] and the rest.
[[nodiscard]] inline TailReport tail_fraction(const FieldProfile& profile, double source_x, double t) {
    if (profile.grid.size() != profile.values.size()) throw DimensionMismatch("profile grid/value size mismatch");
    if (t < 0.0 || t > std::min(source_x, 1.0 - source_x) + 1e-12)
        throw ConfigError("tail_fraction: cone of half-width " + std::to_string(t) + " around x=" +
                          std::to_string(source_x) + " reaches a wall; reflected cones are not handled");
    constexpr double kEdge = 1e-12;
    TailReport rep;
    rep.source_x = source_x;
    rep.t = t;
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
        const double x = profile.grid[i];
        if (x >= source_x - t - kEdge && x <= source_x + t + kEdge)
            rep.inside_weight += profile.values[i];
        else
            rep.outside_weight += profile.values[i];
    }
    const double total = rep.inside_weight + rep.outside_weight;
    rep.tail_fraction = total > 0.0 ? rep.outside_weight / total : 0.0;
    return rep;
}

/// A time-stamped scalar series, e.g. p3(t).
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> value;
};

/// Mean of the series over samples with 0 <= t < t_causal.
[[nodiscard]] inline double precausal_average(const TimeSeries& series, double t_causal) {
    if (series.t.size() != series.value.size()) throw DimensionMismatch("time series length mismatch");
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        if (series.t[i] >= 0.0 && series.t[i] < t_causal) {
            acc += series.value[i];
            ++n;
        }
    }
    if (n < 2)
        throw ConfigError("precausal_average needs at least 2 samples before t=" + std::to_string(t_causal));
    return acc / static_cast<double>(n);
}

/// p_atom(t) extracted from trajectory samples (atom is 0-based).
[[nodiscard]] inline TimeSeries excitation_series(std::span<const TrajectorySample> samples, std::size_t atom) {
    TimeSeries out;
    out.t.reserve(samples.size());
    out.value.reserve(samples.size());
    for (const auto& s : samples) {
        out.t.push_back(s.t);
        out.value.push_back(std::norm(s.c[atom]));
    }
    return out;
}

}  // namespace rwacav
