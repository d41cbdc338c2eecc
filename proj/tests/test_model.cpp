#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "rwacav/model.hpp"
#include "rwacav/state.hpp"

using namespace rwacav;
using Catch::Approx;

TEST_CASE("symmetric mode set is centred and contiguous", "[model]") {
    const auto m = symmetric_mode_set(3, 2);
    REQUIRE(m.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(m.indices()[k] == static_cast<long>(k + 1));
        CHECK(m.frequencies()[k] == static_cast<double>(k + 1) * std::numbers::pi);
    }
    CHECK(m.is_symmetric());
    CHECK(m.describe() == "symmetric(center=3,half=2)");
}

TEST_CASE("symmetric mode set rejects a lower edge below 1", "[model]") {
    CHECK_THROWS_AS(symmetric_mode_set(5000, 5000), ConfigError);
    CHECK_THROWS_AS(symmetric_mode_set(2, 2), ConfigError);
    const auto m = symmetric_mode_set(5001, 5000);
    CHECK(m.size() == 10001);
    CHECK(m.first_index() == 1);
    CHECK(m.last_index() == 10001);
}

TEST_CASE("asymmetric mode sets", "[model]") {
    const auto m = asymmetric_mode_set(1, 3);
    REQUIRE(m.size() == 3);
    CHECK(m.indices()[2] == 3);

    const auto single = asymmetric_mode_set(5, 1);
    REQUIRE(single.size() == 1);
    CHECK(single.indices()[0] == 5);
    CHECK(single.frequencies()[0] == 5.0 * std::numbers::pi);

    for (long n : {10000L, 20000L, 30000L}) {
        const auto fig3 = asymmetric_mode_set(1, n);
        CHECK(fig3.size() == static_cast<std::size_t>(n));
        CHECK(fig3.first_index() == 1);
        CHECK(fig3.last_index() == n);
    }
    CHECK_THROWS_AS(asymmetric_mode_set(0, 3), ConfigError);
    CHECK_THROWS_AS(asymmetric_mode_set(1, 0), ConfigError);
}

TEST_CASE("mode frequencies recover their indices exactly", "[model][property]") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> center(50, 4000), half(1, 49);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = symmetric_mode_set(center(rng), half(rng));
        const auto pol = std::get<SymmetricPolicy>(m.policy());
        const double w0 = static_cast<double>(pol.center_index) * std::numbers::pi;
        for (std::size_t k = 0; k < m.size(); ++k) {
            CHECK(std::lround(m.frequencies()[k] / std::numbers::pi) == m.indices()[k]);
            // offsets from the center come in +/- pairs
            const std::size_t mirror = m.size() - 1 - k;
            CHECK(m.frequencies()[k] - w0 == Approx(-(m.frequencies()[mirror] - w0)).margin(1e-9));
        }
        for (std::size_t k = 1; k < m.size(); ++k) CHECK(m.indices()[k] == m.indices()[k - 1] + 1);
    }
}

TEST_CASE("coupling examples", "[model]") {
    const auto atoms = make_atoms(10.0 * std::numbers::pi);
    const auto modes = asymmetric_mode_set(1, 4);
    const auto g = coupling_matrix(atoms, modes);
    // n = 1 column for x = (1/4, 1/2, 3/4), gamma = (1, 16, 256)
    CHECK(g(0, 0) == Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(g(1, 0) == Approx(4.0).epsilon(1e-15));
    CHECK(g(2, 0) == Approx(16.0 * std::sqrt(0.5)).epsilon(1e-15));
    CHECK(g(2, 0) == Approx(11.3137084989848).epsilon(1e-12));
    // atom 1 at x = 1/4, n = 2: sin(pi/2) = 1
    CHECK(g(0, 1) == 1.0);
    // atom 2 at x = 1/2 sits on a node of every even mode
    CHECK(g(1, 1) == 0.0);
    CHECK(g(1, 3) == 0.0);
    CHECK(g.amplitude(2) == 16.0);
}

TEST_CASE("coupling matrix invariants", "[model][property]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> gamma(0.0, 300.0);
    std::uniform_int_distribution<int> eighths(1, 7);
    for (int trial = 0; trial < 30; ++trial) {
        AtomSetup setup;
        for (std::size_t j = 0; j < 3; ++j) {
            setup.decay_rates[j] = gamma(rng);
            setup.positions[j] = eighths(rng) / 8.0;
        }
        const auto atoms = make_atoms(100.0, setup);
        const auto modes = asymmetric_mode_set(1, 64);
        const auto g = coupling_matrix(atoms, modes);
        for (std::size_t j = 0; j < 3; ++j) {
            const double omega = std::sqrt(setup.decay_rates[j]);
            for (std::size_t k = 0; k < modes.size(); ++k) {
                CHECK(std::abs(g(j, k)) <= omega);
                const double nx = static_cast<double>(modes.indices()[k]) * setup.positions[j];
                const bool node = nx == std::floor(nx);
                if (node) CHECK(g(j, k) == 0.0);
                if (!node && omega > 0.0) CHECK(g(j, k) != 0.0);
            }
        }
        CHECK(coupling_matrix(atoms, modes) == g);  // bit-identical on rebuild
    }
}

TEST_CASE("sin_pi has exact zeros and matches std::sin", "[model]") {
    for (int n = -6; n <= 6; ++n) CHECK(sin_pi(n) == 0.0);
    for (double y : {0.1, 0.25, 0.5, 0.75, 1.3, 2.9, 1234.5678, -3.7}) CHECK(sin_pi(y) == Approx(std::sin(std::numbers::pi * y)).margin(1e-12));
}

TEST_CASE("atom validation", "[model]") {
    AtomSetup setup;
    setup.positions[1] = 1.0;
    CHECK_THROWS_AS(make_atoms(10.0, setup), ConfigError);
    setup = {};
    setup.decay_rates[0] = -1.0;
    CHECK_THROWS_AS(make_atoms(10.0, setup), ConfigError);
    setup = {};
    CHECK_THROWS_AS(make_atoms(3.0, setup), ConfigError);  // w2 = w1 - 4 < 0
    const auto atoms = make_atoms(10.0);
    CHECK(atoms[0].transition_frequency == 10.0);
    CHECK(atoms[1].transition_frequency == 6.0);
    CHECK(atoms[2].transition_frequency == 10.0);
}

TEST_CASE("initial state", "[model][state]") {
    const auto modes = asymmetric_mode_set(4, 3);
    const auto s = initial_state(modes);
    CHECK(s.t == 0.0);
    CHECK(s.c(0) == cplx(1.0, 0.0));
    CHECK(s.c(1) == cplx{});
    CHECK(s.c(2) == cplx{});
    REQUIRE(s.b().size() == 3);
    for (const auto& b : s.b()) CHECK(b == cplx{});
    CHECK(norm_squared(s) == 1.0);
}
