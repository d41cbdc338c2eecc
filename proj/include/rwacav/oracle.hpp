#pragma once

// Exact propagation exp(-iHt) psi for small systems through a dense
// eigendecomposition of the single-excitation Hamiltonian. Independent of the
// ABM integrator; used to check it.

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "rwacav/model.hpp"
#include "rwacav/state.hpp"

namespace rwacav {

inline constexpr std::size_t kOracleModeCap = 512;

/// (3+N)x(3+N) Hamiltonian: w_j and w_n on the diagonal, g_jn off the diagonal.
[[nodiscard]] inline Eigen::MatrixXd assemble_hamiltonian(const CavitySystem& sys) {
    const auto dim = static_cast<Eigen::Index>(sys.dimension());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t j = 0; j < kAtomCount; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        h(jj, jj) = sys.atoms[j].transition_frequency;
        for (std::size_t k = 0; k < sys.mode_count(); ++k) {
            const auto kk = static_cast<Eigen::Index>(kAtomCount + k);
            h(jj, kk) = sys.couplings(j, k);
            h(kk, jj) = sys.couplings(j, k);
        }
    }
    for (std::size_t k = 0; k < sys.mode_count(); ++k) {
        const auto kk = static_cast<Eigen::Index>(kAtomCount + k);
        h(kk, kk) = sys.modes.frequencies()[k];
    }
    return h;
}

/// Reusable eigenbasis; propagate() is then O(dim^2) per call.
class ExactPropagator {
public:
    explicit ExactPropagator(const CavitySystem& sys, std::size_t mode_cap = kOracleModeCap) {
        if (sys.mode_count() > mode_cap)
            throw ConfigError("oracle limited to " + std::to_string(mode_cap) + " modes, got " +
                              std::to_string(sys.mode_count()));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(assemble_hamiltonian(sys));
        if (solver.info() != Eigen::Success) throw std::runtime_error("oracle eigendecomposition failed");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    [[nodiscard]] AmplitudeState propagate(const AmplitudeState& initial, double t) const {
        const auto dim = vectors_.rows();
        if (static_cast<Eigen::Index>(initial.amplitudes.size()) != dim)
            throw DimensionMismatch("oracle: state dimension does not match the system");
        const Eigen::Map<const Eigen::VectorXcd> psi(initial.amplitudes.data(), dim);
        Eigen::VectorXcd coeff = vectors_.transpose().cast<std::complex<double>>() * psi;
        const double dt = t - initial.t;
        for (Eigen::Index k = 0; k < dim; ++k) coeff(k) *= std::polar(1.0, -energies_(k) * dt);
        AmplitudeState out(initial.mode_count(), t);
        Eigen::Map<Eigen::VectorXcd>(out.amplitudes.data(), dim) = vectors_.cast<std::complex<double>>() * coeff;
        return out;
    }

    [[nodiscard]] const Eigen::VectorXd& energies() const noexcept { return energies_; }

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
};

/// State at time `t` (absolute), starting from `initial` at initial.t.
[[nodiscard]] inline AmplitudeState propagate_oracle(const AmplitudeState& initial, const CavitySystem& sys, double t,
                                                     std::size_t mode_cap = kOracleModeCap) {
    check_dimensions(initial, sys);
    return ExactPropagator(sys, mode_cap).propagate(initial, t);
}

}  // namespace rwacav
