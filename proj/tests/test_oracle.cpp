#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "rwacav/experiments.hpp"
#include "rwacav/oracle.hpp"
#include "rwacav/verification.hpp"

using namespace rwacav;
using Catch::Approx;

namespace {

AmplitudeState random_state(std::size_t modes, std::mt19937& rng) {
    std::normal_distribution<double> nd;
    AmplitudeState s(modes);
    for (auto& a : s.amplitudes) a = cplx(nd(rng), nd(rng));
    const double n = std::sqrt(norm_squared(s));
    for (auto& a : s.amplitudes) a /= n;
    return s;
}

// exp(-iHt) psi by Taylor series with scaling and squaring: no eigensolver.
std::vector<cplx> taylor_propagate(const Eigen::MatrixXd& h, const std::vector<cplx>& psi, double t) {
    const auto dim = h.rows();
    const double norm = h.cwiseAbs().rowwise().sum().maxCoeff() * t;
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
    const double dt = t / std::pow(2.0, squarings);
    const Eigen::MatrixXcd a = std::complex<double>(0.0, -dt) * h.cast<std::complex<double>>();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim), term = u;
    for (int k = 1; k <= 30; ++k) {
        term = term * a / static_cast<double>(k);
        u += term;
    }
    for (int s = 0; s < squarings; ++s) u = u * u;
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = psi[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd out = u * v;
    return {out.data(), out.data() + dim};
}

}  // namespace

TEST_CASE("oracle at t = 0 is the identity", "[oracle]") {
    const auto sys = oracle_test_system();
    std::mt19937 rng(1);
    const auto psi = random_state(sys.mode_count(), rng);
    CHECK(max_amplitude_error(propagate_oracle(psi, sys, 0.0), psi) <= 1e-14);
}

TEST_CASE("oracle Rabi half period", "[oracle]") {
    const auto sys = rabi_test_system();
    const auto out = propagate_oracle(initial_state(sys.modes), sys, std::numbers::pi / 2);
    CHECK(std::abs(out.c(0)) == Approx(0.0).margin(1e-13));
    CHECK(std::abs(out.b()[0]) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("oracle free evolution without coupling", "[oracle]") {
    AtomSetup setup;
    setup.decay_rates = {0.0, 0.0, 0.0};
    const auto sys = CavitySystem(make_atoms(7.5, setup), asymmetric_mode_set(1, 5));
    for (double t : {0.3, 1.7, 9.2}) {
        const auto out = propagate_oracle(initial_state(sys.modes), sys, t);
        CHECK(std::abs(out.c(0) - std::polar(1.0, -7.5 * t)) <= 1e-13);
        CHECK(std::abs(out.c(1)) == 0.0);
    }
}

TEST_CASE("assembled Hamiltonian is exactly symmetric", "[oracle]") {
    const auto h = assemble_hamiltonian(oracle_test_system());
    CHECK(h == h.transpose());
    CHECK(h.rows() == 11);
}

TEST_CASE("oracle is unitary and conserves energy", "[oracle][property]") {
    const auto sys = oracle_test_system();
    const ExactPropagator prop(sys);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> times(0.0, 10.0);
    for (int trial = 0; trial < 25; ++trial) {
        const auto psi = random_state(sys.mode_count(), rng);
        const auto out = prop.propagate(psi, times(rng));
        CHECK(std::abs(norm_squared(out) - norm_squared(psi)) <= 1e-12);
    }
    const auto psi = random_state(sys.mode_count(), rng);
    const double e0 = energy_expectation(psi, sys);
    const double e1 = energy_expectation(prop.propagate(psi, 0.7), sys);
    CHECK(std::abs(e1 - e0) <= 1e-10 * std::abs(e0));
}

TEST_CASE("oracle agrees with a Taylor-series matrix exponential", "[oracle]") {
    const auto sys = oracle_test_system();
    std::mt19937 rng(23);
    const auto psi = random_state(sys.mode_count(), rng);
    const auto h = assemble_hamiltonian(sys);
    for (double t : {0.1, 1.0, 3.3}) {
        const auto a = propagate_oracle(psi, sys, t);
        const auto b = taylor_propagate(h, psi.amplitudes, t);
        for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::abs(a.amplitudes[i] - b[i]) <= 1e-11);
    }
}

TEST_CASE("oracle enforces its mode cap", "[oracle][errors]") {
    const auto sys = CavitySystem(make_atoms(600.0 * std::numbers::pi), asymmetric_mode_set(1, 513));
    CHECK_THROWS_AS(propagate_oracle(initial_state(sys.modes), sys, 0.1), ConfigError);
    CHECK_NOTHROW(propagate_oracle(initial_state(sys.modes), sys, 0.1, 1024));
}
