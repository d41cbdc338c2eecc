#pragma once

// Equations of motion in the single-excitation sector and a fixed-step
// fourth-order Adams-Bashforth-Moulton integrator for them.
//
//   dc_j/dt = -i (w_j c_j + sum_n g_jn b_n)
//   db_n/dt = -i (w_n b_n + sum_j g_jn c_j)
//
// Mode sums use a fixed summation order so results are bit-reproducible.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rwacav/model.hpp"
#include "rwacav/state.hpp"

namespace rwacav {

/// Writes the time derivative of `y` into `dy`. Both hold 3 + N amplitudes.
inline void rhs(const CavitySystem& sys, std::span<const cplx> y, std::span<cplx> dy) {
    const std::size_t n = sys.mode_count();
    if (y.size() != kAtomCount + n || dy.size() != y.size())
        throw DimensionMismatch("rhs: expected " + std::to_string(kAtomCount + n) + " amplitudes, got " +
                                std::to_string(y.size()) + " -> " + std::to_string(dy.size()));

    const double c0r = y[0].real(), c0i = y[0].imag();
    const double c1r = y[1].real(), c1i = y[1].imag();
    const double c2r = y[2].real(), c2i = y[2].imag();
    const double* g0 = sys.couplings.row(0).data();
    const double* g1 = sys.couplings.row(1).data();
    const double* g2 = sys.couplings.row(2).data();
    const double* w = sys.modes.frequencies().data();
    // std::complex<double> is layout-compatible with double[2].
    const double* b = reinterpret_cast<const double*>(y.data() + kAtomCount);
    double* db = reinterpret_cast<double*>(dy.data() + kAtomCount);

    // Each mode sum keeps kLanes interleaved partial sums (slot k feeds lane
    // k % kLanes) that are added in lane order at the end. The order is fixed,
    // so results do not depend on the machine or build.
    constexpr std::size_t kLanes = 4;
    double acc[6][kLanes] = {};
    auto mode = [&](std::size_t k, std::size_t lane) {
        const double br = b[2 * k], bi = b[2 * k + 1];
        const double a0 = g0[k], a1 = g1[k], a2 = g2[k];
        const double re = w[k] * br + (a0 * c0r + a1 * c1r + a2 * c2r);
        const double im = w[k] * bi + (a0 * c0i + a1 * c1i + a2 * c2i);
        db[2 * k] = im;
        db[2 * k + 1] = -re;
        acc[0][lane] += a0 * br;
        acc[1][lane] += a0 * bi;
        acc[2][lane] += a1 * br;
        acc[3][lane] += a1 * bi;
        acc[4][lane] += a2 * br;
        acc[5][lane] += a2 * bi;
    };
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes)
        for (std::size_t lane = 0; lane < kLanes; ++lane) mode(k + lane, lane);
    for (std::size_t lane = 0; k < n; ++k, ++lane) mode(k, lane);

    double sum[6];
    for (std::size_t q = 0; q < 6; ++q) sum[q] = ((acc[q][0] + acc[q][1]) + acc[q][2]) + acc[q][3];
    const std::array<double, 3> sr{sum[0], sum[2], sum[4]}, si{sum[1], sum[3], sum[5]};
    for (std::size_t j = 0; j < kAtomCount; ++j) {
        const double wj = sys.atoms[j].transition_frequency;
        const double re = wj * y[j].real() + sr[j];
        const double im = wj * y[j].imag() + si[j];
        dy[j] = cplx(im, -re);
    }
}

[[nodiscard]] inline std::vector<cplx> rhs(const AmplitudeState& s, const CavitySystem& sys) {
    check_dimensions(s, sys);
    std::vector<cplx> dy(s.amplitudes.size());
    rhs(sys, s.amplitudes, dy);
    return dy;
}

struct IntegratorConfig {
    double step_size = 0.0;          ///< upper bound on h; the run uses (t_end - t0) / ceil(...)
    int corrector_iterations = 1;    ///< 1 = PECE
    std::size_t sample_stride = 1;   ///< record every k-th step (plus the last)
    double resolution_cap = 0.3;     ///< refuse to run when h * w_max exceeds this

    static constexpr int order = 4;
    static constexpr const char* bootstrap = "rk4";

    void validate(double max_frequency) const {
        if (!(step_size > 0.0) || !std::isfinite(step_size))
            throw ConfigError("integrator step size must be positive and finite", "integrator.step_size");
        if (corrector_iterations < 1)
            throw ConfigError("corrector_iterations must be >= 1", "integrator.corrector_iterations");
        if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1", "integrator.sample_stride");
        if (!(resolution_cap > 0.0)) throw ConfigError("resolution_cap must be > 0", "integrator.resolution_cap");
        if (step_size * max_frequency > resolution_cap * (1.0 + 1e-12))
            throw ConfigError("step size " + std::to_string(step_size) + " under-resolves w_max=" +
                                  std::to_string(max_frequency) + " (h*w_max=" +
                                  std::to_string(step_size * max_frequency) + " > cap " +
                                  std::to_string(resolution_cap) + ")",
                              "integrator.step_size");
    }

    /// Largest step allowed for a given phase advance per step of the fastest mode.
    [[nodiscard]] static double step_for_phase(double phase_per_step, double max_frequency) {
        return phase_per_step / max_frequency;
    }
};

/// Reduced per-sample record kept for every stored step.
struct TrajectorySample {
    double t = 0.0;
    std::array<cplx, kAtomCount> c{};
    double norm2 = 0.0;
    double energy = 0.0;
};

struct TrajectoryMetadata {
    double step_size = 0.0;
    std::size_t steps = 0;
    int order = IntegratorConfig::order;
    std::string bootstrap = IntegratorConfig::bootstrap;
    int corrector_iterations = 1;
    std::size_t sample_stride = 1;
    std::string modes;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;   ///< strictly increasing t, first entry at t0
    std::vector<AmplitudeState> snapshots;   ///< full states at requested times
    AmplitudeState final_state;
    TrajectoryMetadata metadata;
};

/// Optional side channels of a run.
struct IntegrationHooks {
    std::vector<double> snapshot_times;                           ///< nearest step is captured
    std::function<void(const TrajectorySample&)> on_sample;       ///< streamed as samples are taken
    const std::atomic<bool>* cancel = nullptr;                    ///< checked once per step
    bool keep_samples = true;
};

[[nodiscard]] inline TrajectorySample make_sample(const AmplitudeState& s, const CavitySystem& sys) {
    TrajectorySample out;
    out.t = s.t;
    for (std::size_t j = 0; j < kAtomCount; ++j) out.c[j] = s.c(j);
    out.norm2 = norm_squared(s);
    out.energy = energy_expectation(s, sys);
    return out;
}

/// Fourth-order Adams-Bashforth predictor with fourth-order Adams-Moulton
/// corrector (PECE by default), bootstrapped by three classical RK4 steps.
/// One instance drives one evolution.
class AbmIntegrator {
public:
    AbmIntegrator(const CavitySystem& sys, AmplitudeState initial, double h, int corrector_iterations = 1)
        : sys_(sys), h_(h), iterations_(corrector_iterations), t0_(initial.t), y_(std::move(initial)) {
        check_dimensions(y_, sys_);
        const std::size_t dim = y_.amplitudes.size();
        for (auto& f : hist_) f.assign(dim, cplx{});
        work_.assign(dim, cplx{});
        fwork_.assign(dim, cplx{});
        ynew_.assign(dim, cplx{});
        rhs(sys_, y_.amplitudes, hist_[0]);
    }

    [[nodiscard]] const AmplitudeState& state() const noexcept { return y_; }
    [[nodiscard]] std::size_t steps_taken() const noexcept { return steps_; }
    [[nodiscard]] double step_size() const noexcept { return h_; }
    void set_time(double t) noexcept { y_.t = t; }

    void step() {
        if (steps_ < 3)
            rk4_step();
        else
            abm_step();
        ++steps_;
        y_.t = t0_ + static_cast<double>(steps_) * h_;
        // Coupled modes feed NaNs into the c block; samples check the full norm.
        for (std::size_t j = 0; j < kAtomCount; ++j)
            if (!std::isfinite(y_.c(j).real()) || !std::isfinite(y_.c(j).imag()))
                throw IntegrationFailure("non-finite amplitude at t=" + std::to_string(y_.t), y_.t);
    }

private:
    // hist_[0] = f_n, hist_[1] = f_{n-1}, ...
    void push_derivative() {
        std::rotate(hist_.rbegin(), hist_.rbegin() + 1, hist_.rend());
        rhs(sys_, y_.amplitudes, hist_[0]);
    }

    void rk4_step() {
        const std::size_t dim = y_.amplitudes.size();
        auto& y = y_.amplitudes;
        const auto& k1 = hist_[0];
        std::vector<cplx> k2(dim), k3(dim), k4(dim);
        for (std::size_t i = 0; i < dim; ++i) work_[i] = y[i] + 0.5 * h_ * k1[i];
        rhs(sys_, work_, k2);
        for (std::size_t i = 0; i < dim; ++i) work_[i] = y[i] + 0.5 * h_ * k2[i];
        rhs(sys_, work_, k3);
        for (std::size_t i = 0; i < dim; ++i) work_[i] = y[i] + h_ * k3[i];
        rhs(sys_, work_, k4);
        const double s = h_ / 6.0;
        for (std::size_t i = 0; i < dim; ++i) y[i] += s * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        push_derivative();
    }

    void abm_step() {
        // Real/imaginary parts are combined with real weights, so the loops
        // run over the interleaved doubles.
        const std::size_t len = 2 * y_.amplitudes.size();
        const double* y = reinterpret_cast<const double*>(y_.amplitudes.data());
        const double* f0 = reinterpret_cast<const double*>(hist_[0].data());
        const double* f1 = reinterpret_cast<const double*>(hist_[1].data());
        const double* f2 = reinterpret_cast<const double*>(hist_[2].data());
        const double* f3 = reinterpret_cast<const double*>(hist_[3].data());
        double* pred = reinterpret_cast<double*>(work_.data());
        double* corr = reinterpret_cast<double*>(ynew_.data());
        const double* fp = reinterpret_cast<const double*>(fwork_.data());
        const double s = h_ / 24.0;
        for (std::size_t i = 0; i < len; ++i)
            pred[i] = y[i] + s * (55.0 * f0[i] - 59.0 * f1[i] + 37.0 * f2[i] - 9.0 * f3[i]);
        for (int it = 0; it < iterations_; ++it) {
            rhs(sys_, it == 0 ? work_ : ynew_, fwork_);
            for (std::size_t i = 0; i < len; ++i)
                corr[i] = y[i] + s * (9.0 * fp[i] + 19.0 * f0[i] - 5.0 * f1[i] + f2[i]);
        }
        y_.amplitudes.swap(ynew_);
        push_derivative();
    }

    const CavitySystem& sys_;
    double h_;
    int iterations_;
    double t0_;
    AmplitudeState y_;
    std::size_t steps_ = 0;
    std::array<std::vector<cplx>, 4> hist_;
    std::vector<cplx> work_, fwork_, ynew_;
};

/// Number of equal steps covering [t0, t_end] no longer than `max_step`.
[[nodiscard]] inline std::size_t step_count(double t0, double t_end, double max_step) {
    const double n = (t_end - t0) / max_step;
    auto steps = static_cast<std::size_t>(std::ceil(n - 1e-9));
    return steps == 0 ? 1 : steps;
}

/// Evolves `initial` to `t_end` with the ABM4 scheme.
[[nodiscard]] inline Trajectory integrate(const AmplitudeState& initial, const CavitySystem& sys,
                                          const IntegratorConfig& config, double t_end,
                                          const IntegrationHooks& hooks = {}) {
    check_dimensions(initial, sys);
    config.validate(sys.max_frequency());
    if (!(t_end > initial.t)) throw ConfigError("t_end must exceed the initial time", "integrator.t_end");

    const std::size_t steps = step_count(initial.t, t_end, config.step_size);
    const double h = (t_end - initial.t) / static_cast<double>(steps);

    Trajectory traj;
    traj.metadata.step_size = h;
    traj.metadata.steps = steps;
    traj.metadata.corrector_iterations = config.corrector_iterations;
    traj.metadata.sample_stride = config.sample_stride;
    traj.metadata.modes = sys.modes.describe();

    // Step index nearest to each requested snapshot time.
    std::vector<std::pair<std::size_t, std::size_t>> snap_steps;  // (step, request order)
    for (std::size_t r = 0; r < hooks.snapshot_times.size(); ++r) {
        const double ts = hooks.snapshot_times[r];
        if (ts < initial.t || ts > t_end) throw ConfigError("snapshot time outside the integration window");
        snap_steps.emplace_back(static_cast<std::size_t>(std::llround((ts - initial.t) / h)), r);
    }
    std::sort(snap_steps.begin(), snap_steps.end());
    traj.snapshots.resize(snap_steps.size());
    std::size_t next_snap = 0;

    auto record = [&](const AmplitudeState& s) {
        const auto sample = make_sample(s, sys);
        if (!std::isfinite(sample.norm2) || !std::isfinite(sample.energy))
            throw IntegrationFailure("non-finite amplitude at t=" + std::to_string(s.t), s.t);
        if (hooks.on_sample) hooks.on_sample(sample);
        if (hooks.keep_samples) traj.samples.push_back(sample);
    };
    auto capture = [&](std::size_t step, const AmplitudeState& s) {
        while (next_snap < snap_steps.size() && snap_steps[next_snap].first == step) {
            traj.snapshots[snap_steps[next_snap].second] = s;
            ++next_snap;
        }
    };

    AbmIntegrator stepper(sys, initial, h, config.corrector_iterations);
    record(stepper.state());
    capture(0, stepper.state());
    for (std::size_t k = 1; k <= steps; ++k) {
        if (hooks.cancel && hooks.cancel->load(std::memory_order_relaxed))
            throw Interrupted(stepper.state().t);
        stepper.step();
        if (k == steps) {
            stepper.set_time(t_end);  // exact endpoint despite rounding in t0 + k*h
        }
        if (k % config.sample_stride == 0 || k == steps) record(stepper.state());
        capture(k, stepper.state());
    }
    traj.final_state = stepper.state();
    return traj;
}

}  // namespace rwacav
