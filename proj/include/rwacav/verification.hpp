#pragma once

// Integrator-vs-oracle checks shared by the CLI `oracle-check` command and
// the test suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include "rwacav/dynamics.hpp"
#include "rwacav/experiments.hpp"
#include "rwacav/oracle.hpp"

namespace rwacav {

[[nodiscard]] inline double max_amplitude_error(const AmplitudeState& a, const AmplitudeState& b) {
    if (a.amplitudes.size() != b.amplitudes.size()) throw DimensionMismatch("states differ in dimension");
    double err = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) err = std::max(err, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    return err;
}

/// Max |ABM - exact| over all amplitudes at t_end for a given step.
[[nodiscard]] inline double integrator_error(const CavitySystem& sys, const AmplitudeState& initial, double step,
                                             double t_end) {
    IntegratorConfig cfg;
    cfg.step_size = step;
    cfg.sample_stride = step_count(initial.t, t_end, step);
    const auto traj = integrate(initial, sys, cfg, t_end);
    return max_amplitude_error(traj.final_state, propagate_oracle(initial, sys, t_end));
}

struct OracleCheckReport {
    double max_amplitude_error = 0.0;  ///< 8-mode system at t = 1
    double rabi_max_error = 0.0;       ///< max |p1 - cos^2 t| over [0, pi]
    double oracle_norm_drift = 0.0;    ///< |norm^2 - 1| of the exact propagator at t = 1
};

inline constexpr double kOracleCheckStep = 1e-4;
inline constexpr double kOracleCheckTolerance = 1e-8;

[[nodiscard]] inline OracleCheckReport run_oracle_check() {
    OracleCheckReport rep;
    const auto sys = oracle_test_system();
    const auto psi0 = initial_state(sys.modes);
    rep.max_amplitude_error = integrator_error(sys, psi0, kOracleCheckStep, 1.0);
    rep.oracle_norm_drift = std::abs(norm_squared(propagate_oracle(psi0, sys, 1.0)) - 1.0);

    const auto rabi = rabi_test_system();
    IntegratorConfig cfg;
    cfg.step_size = 1e-3;
    const auto traj = integrate(initial_state(rabi.modes), rabi, cfg, std::numbers::pi);
    for (const auto& s : traj.samples) {
        const double c = std::cos(s.t);
        rep.rabi_max_error = std::max(rep.rabi_max_error, std::abs(std::norm(s.c[0]) - c * c));
    }
    return rep;
}

}  // namespace rwacav
