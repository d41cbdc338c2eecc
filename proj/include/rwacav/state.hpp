#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rwacav/model.hpp"

namespace rwacav {

using cplx = std::complex<double>;

/// Single-excitation state: atomic amplitudes c_1..c_3 followed by one field
/// amplitude b_n per mode slot, stored contiguously.
struct AmplitudeState {
    double t = 0.0;
    std::vector<cplx> amplitudes;

    AmplitudeState() = default;
    explicit AmplitudeState(std::size_t mode_count, double time = 0.0)
        : t(time), amplitudes(kAtomCount + mode_count) {}

    [[nodiscard]] std::size_t mode_count() const noexcept { return amplitudes.size() - kAtomCount; }

    [[nodiscard]] cplx& c(std::size_t atom) { return amplitudes[atom]; }
    [[nodiscard]] const cplx& c(std::size_t atom) const { return amplitudes[atom]; }

    [[nodiscard]] std::span<cplx> b() { return std::span<cplx>(amplitudes).subspan(kAtomCount); }
    [[nodiscard]] std::span<const cplx> b() const { return std::span<const cplx>(amplitudes).subspan(kAtomCount); }

    friend bool operator==(const AmplitudeState&, const AmplitudeState&) = default;
};

/// Atom 1 excited, atoms 2 and 3 in the ground state, field in vacuum.
[[nodiscard]] inline AmplitudeState initial_state(const ModeSet& modes) {
    AmplitudeState s(modes.size());
    s.c(0) = 1.0;
    return s;
}

[[nodiscard]] inline double norm_squared(const AmplitudeState& s) {
    double acc = 0.0;
    for (const auto& a : s.amplitudes) acc += std::norm(a);
    return acc;
}

inline void check_dimensions(const AmplitudeState& s, const CavitySystem& sys) {
    if (s.amplitudes.size() != sys.dimension())
        throw DimensionMismatch("state has " + std::to_string(s.amplitudes.size()) +
                                " amplitudes, system needs " + std::to_string(sys.dimension()));
}

/// <psi|H|psi> without the constant pseudospin offset:
/// sum_j w_j |c_j|^2 + sum_n w_n |b_n|^2 + 2 Re sum_jn g_jn conj(c_j) b_n.
[[nodiscard]] inline double energy_expectation(const AmplitudeState& s, const CavitySystem& sys) {
    check_dimensions(s, sys);
    double diag = 0.0;
    for (std::size_t j = 0; j < kAtomCount; ++j) diag += sys.atoms[j].transition_frequency * std::norm(s.c(j));
    const auto b = s.b();
    const auto w = sys.modes.frequencies();
    double field = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) field += w[k] * std::norm(b[k]);
    double cross = 0.0;
    for (std::size_t j = 0; j < kAtomCount; ++j) {
        const auto g = sys.couplings.row(j);
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k) {
            re += g[k] * b[k].real();
            im += g[k] * b[k].imag();
        }
        cross += (std::conj(s.c(j)) * cplx(re, im)).real();
    }
    return diag + field + 2.0 * cross;
}

}  // namespace rwacav
