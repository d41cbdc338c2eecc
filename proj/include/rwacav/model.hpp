#pragma once

// Three two-level atoms in a one-dimensional cavity of unit length (L = c = 1).
// Mode n has frequency n*pi and profile sin(n*pi*x); atom j couples to it with
// g_jn = sqrt(gamma_j) * sin(n*pi*x_j).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rwacav/errors.hpp"

namespace rwacav {

inline constexpr std::size_t kAtomCount = 3;

/// sin(pi*y) with exact zeros at integer y.
[[nodiscard]] inline double sin_pi(double y) {
    double r = std::fmod(y, 2.0);  // exact, r in (-2, 2)
    if (r > 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    if (r > 0.5) r = 1.0 - r;
    if (r < -0.5) r = -1.0 - r;
    return std::sin(std::numbers::pi * r);
}

struct AtomParams {
    int index = 1;                     ///< 1, 2 or 3
    double position_fraction = 0.5;    ///< x_j / L, strictly inside (0, 1)
    double transition_frequency = 1.0; ///< omega_j in units of c/L
    double decay_rate = 0.0;           ///< gamma_j = |Omega_j|^2

    [[nodiscard]] double coupling_amplitude() const { return std::sqrt(decay_rate); }

    void validate() const {
        if (index < 1 || index > static_cast<int>(kAtomCount))
            throw ConfigError("atom index must be 1, 2 or 3");
        if (!(position_fraction > 0.0 && position_fraction < 1.0))
            throw ConfigError("atom " + std::to_string(index) + " position must lie strictly inside (0, 1)");
        if (!(transition_frequency > 0.0))
            throw ConfigError("atom " + std::to_string(index) + " transition frequency must be > 0");
        if (!(decay_rate >= 0.0))
            throw ConfigError("atom " + std::to_string(index) + " decay rate must be >= 0");
    }
};

using Atoms = std::array<AtomParams, kAtomCount>;

/// Physical parameters shared by every preset scenario.
struct AtomSetup {
    std::array<double, kAtomCount> decay_rates{1.0, 16.0, 256.0};
    std::array<double, kAtomCount> positions{0.25, 0.5, 0.75};
    double detuning = 4.0;  ///< omega_1 - omega_2; atoms 1 and 3 are degenerate
};

/// Atoms with omega_1 = omega_3 = omega1 and omega_2 = omega1 - detuning.
[[nodiscard]] inline Atoms make_atoms(double omega1, const AtomSetup& setup = {}) {
    Atoms atoms{};
    const std::array<double, kAtomCount> freqs{omega1, omega1 - setup.detuning, omega1};
    for (std::size_t j = 0; j < kAtomCount; ++j) {
        atoms[j] = AtomParams{static_cast<int>(j + 1), setup.positions[j], freqs[j], setup.decay_rates[j]};
        atoms[j].validate();
    }
    return atoms;
}

struct SymmetricPolicy {
    long center_index = 0;
    long half_count = 0;
};

struct AsymmetricPolicy {
    long lowest_index = 0;
    long count = 0;
};

using ModePolicy = std::variant<SymmetricPolicy, AsymmetricPolicy>;

/// Consecutive cavity modes n = first .. first+size-1 with omega_n = n*pi.
class ModeSet {
public:
    ModeSet(long first_index, long count, ModePolicy policy) : policy_(policy) {
        if (first_index < 1) throw ConfigError("mode indices must be >= 1");
        if (count < 1) throw ConfigError("mode set must be nonempty");
        indices_.reserve(static_cast<std::size_t>(count));
        frequencies_.reserve(static_cast<std::size_t>(count));
        for (long n = first_index; n < first_index + count; ++n) {
            indices_.push_back(n);
            frequencies_.push_back(static_cast<double>(n) * std::numbers::pi);
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] std::span<const long> indices() const noexcept { return indices_; }
    [[nodiscard]] std::span<const double> frequencies() const noexcept { return frequencies_; }
    [[nodiscard]] const ModePolicy& policy() const noexcept { return policy_; }
    [[nodiscard]] long first_index() const noexcept { return indices_.front(); }
    [[nodiscard]] long last_index() const noexcept { return indices_.back(); }
    [[nodiscard]] double max_frequency() const noexcept { return frequencies_.back(); }
    [[nodiscard]] bool is_symmetric() const noexcept {
        return std::holds_alternative<SymmetricPolicy>(policy_);
    }

    /// Short identity string, e.g. "symmetric(center=1001,half=1000)".
    [[nodiscard]] std::string describe() const {
        if (const auto* s = std::get_if<SymmetricPolicy>(&policy_))
            return "symmetric(center=" + std::to_string(s->center_index) +
                   ",half=" + std::to_string(s->half_count) + ")";
        const auto& a = std::get<AsymmetricPolicy>(policy_);
        return "asymmetric(lowest=" + std::to_string(a.lowest_index) +
               ",count=" + std::to_string(a.count) + ")";
    }

private:
    std::vector<long> indices_;
    std::vector<double> frequencies_;
    ModePolicy policy_;
};

/// 2*half_count + 1 modes centred on center_index (center included).
[[nodiscard]] inline ModeSet symmetric_mode_set(long center_index, long half_count) {
    if (center_index < 1 || half_count < 1)
        throw ConfigError("symmetric mode set needs positive center_index and half_count");
    if (center_index - half_count < 1)
        throw ConfigError("symmetric mode set lower edge " + std::to_string(center_index - half_count) +
                          " < 1; raise center_index to at least " + std::to_string(half_count + 1));
    return ModeSet(center_index - half_count, 2 * half_count + 1,
                   SymmetricPolicy{center_index, half_count});
}

[[nodiscard]] inline ModeSet asymmetric_mode_set(long lowest_index, long count) {
    if (lowest_index < 1) throw ConfigError("asymmetric mode set needs lowest_index >= 1");
    if (count < 1) throw ConfigError("asymmetric mode set needs count >= 1");
    return ModeSet(lowest_index, count, AsymmetricPolicy{lowest_index, count});
}

/// g[j][k] for atom j and mode slot k, stored row-major (one row per atom).
class CouplingMatrix {
public:
    CouplingMatrix(const Atoms& atoms, const ModeSet& modes) : modes_(modes.size()), g_(kAtomCount * modes.size()) {
        for (std::size_t j = 0; j < kAtomCount; ++j) {
            atoms[j].validate();
            omega_[j] = atoms[j].coupling_amplitude();
            const double x = atoms[j].position_fraction;
            auto row = g_.begin() + static_cast<std::ptrdiff_t>(j * modes_);
            for (std::size_t k = 0; k < modes_; ++k)
                row[static_cast<std::ptrdiff_t>(k)] = omega_[j] * sin_pi(static_cast<double>(modes.indices()[k]) * x);
        }
    }

    [[nodiscard]] std::size_t mode_count() const noexcept { return modes_; }
    [[nodiscard]] double operator()(std::size_t atom, std::size_t slot) const { return g_[atom * modes_ + slot]; }
    [[nodiscard]] std::span<const double> row(std::size_t atom) const {
        return std::span<const double>(g_).subspan(atom * modes_, modes_);
    }
    /// Omega_j = sqrt(gamma_j).
    [[nodiscard]] double amplitude(std::size_t atom) const { return omega_[atom]; }

    friend bool operator==(const CouplingMatrix&, const CouplingMatrix&) = default;

private:
    std::size_t modes_;
    std::vector<double> g_;
    std::array<double, kAtomCount> omega_{};
};

[[nodiscard]] inline CouplingMatrix coupling_matrix(const Atoms& atoms, const ModeSet& modes) {
    return CouplingMatrix(atoms, modes);
}

/// Everything the equations of motion need.
struct CavitySystem {
    Atoms atoms;
    ModeSet modes;
    CouplingMatrix couplings;

    CavitySystem(const Atoms& a, ModeSet m) : atoms(a), modes(std::move(m)), couplings(atoms, modes) {}

    [[nodiscard]] std::size_t mode_count() const noexcept { return modes.size(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return kAtomCount + modes.size(); }

    /// Largest frequency on the diagonal of the single-excitation Hamiltonian.
    [[nodiscard]] double max_frequency() const noexcept {
        double w = modes.max_frequency();
        for (const auto& a : atoms) w = std::max(w, a.transition_frequency);
        return w;
    }
};

}  // namespace rwacav
