#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "qsdc/errors.hpp"
#include "qsdc/quantum_state.hpp"

using namespace qsdc;
using cd = std::complex<double>;

namespace {

const double h = 1.0 / std::sqrt(2.0);
const std::vector<Qubit> kPair{Qubit::Home, Qubit::Transit};

void check_amplitudes(const JointState& s, const std::vector<cd>& expected) {
    REQUIRE(s.dimension() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(s.amplitudes()[i] - expected[i]) < 1e-12);
    }
}

// Runs measure_qubit under successive seeds until the wanted outcome shows up.
QubitOutcome measure_until(const JointState& s, Qubit q, Basis b, Bit wanted) {
    for (std::uint64_t seed = 1; seed < 1000; ++seed) {
        RandomStream rng(seed);
        auto out = measure_qubit(s, q, b, rng);
        if (out.outcome == wanted) {
            return out;
        }
    }
    FAIL("outcome never observed");
    RandomStream unused(0);
    return measure_qubit(s, q, b, unused);
}

JointState random_pair_state(RandomStream& rng) {
    std::vector<cd> a(4);
    double n = 0;
    for (auto& x : a) {
        x = {rng.uniform() - 0.5, rng.uniform() - 0.5};
        n += std::norm(x);
    }
    for (auto& x : a) {
        x /= std::sqrt(n);
    }
    return JointState(kPair, a);
}

} // namespace

TEST_CASE("bell states have the expected amplitudes") {
    check_amplitudes(bell_state({0, 0}), {0, h, h, 0});
    check_amplitudes(bell_state({1, 0}), {h, 0, 0, h});
    check_amplitudes(bell_state({1, 1}), {h, 0, 0, -h});
    check_amplitudes(bell_state({0, 1}), {0, -h, h, 0});
}

TEST_CASE("bell states are orthonormal") {
    for (Bit a = 0; a < 4; ++a) {
        for (Bit b = 0; b < 4; ++b) {
            const cd ip = inner_product(bell_state({Bit(a >> 1), Bit(a & 1)}), bell_state({Bit(b >> 1), Bit(b & 1)}));
            CHECK(std::abs(ip - cd(a == b ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("pauli on transit maps bell states") {
    CHECK(same_up_to_phase(apply_pauli_on_transit(bell_state({0, 0}), Pauli::X), bell_state({1, 0})));
    CHECK(same_up_to_phase(apply_pauli_on_transit(bell_state({1, 0}), Pauli::Z), bell_state({1, 1})));
    RandomStream rng(5);
    const JointState s = random_pair_state(rng);
    check_amplitudes(apply_pauli_on_transit(s, Pauli::I), {s.amplitudes().begin(), s.amplitudes().end()});
}

TEST_CASE("bell_measure on eigenstates") {
    RandomStream rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        CHECK(bell_measure(bell_state({0, 1}), rng).label == BellLabel{0, 1});
        const auto xz = apply_pauli_on_transit(apply_pauli_on_transit(bell_state({0, 0}), Pauli::X), Pauli::Z);
        CHECK(bell_measure(xz, rng).label == BellLabel{1, 1});
    }
}

TEST_CASE("entangled state projected onto the first ancilla basis state is the initial pair") {
    const JointState attacked = attach_ancilla_and_entangle(bell_state({0, 0}), h, h);
    REQUIRE(attacked.dimension() == 8);

    // Project the last qubit onto |chi_0> by hand and renormalize.
    std::vector<cd> kept;
    double n = 0;
    for (std::size_t i = 0; i < 8; i += 2) {
        kept.push_back(attacked.amplitudes()[i]);
        n += std::norm(attacked.amplitudes()[i]);
    }
    for (auto& a : kept) {
        a /= std::sqrt(n);
    }
    const JointState projected(kPair, kept);

    const std::vector<std::vector<cd>> bells{{0, h, h, 0}, {0, -h, h, 0}, {h, 0, 0, h}, {h, 0, 0, -h}};
    std::vector<double> overlaps;
    for (const auto& b : bells) {
        cd ip = 0;
        for (int i = 0; i < 4; ++i) {
            ip += std::conj(b[i]) * kept[i];
        }
        overlaps.push_back(std::norm(ip));
    }
    CHECK(overlaps[0] == doctest::Approx(1.0));
    CHECK(overlaps[1] + overlaps[2] + overlaps[3] == doctest::Approx(0.0));

    RandomStream rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        CHECK(bell_measure(projected, rng).label == BellLabel{0, 0});
    }
}

TEST_CASE("bell_measure rejects states with an attached ancilla") {
    RandomStream rng(1);
    const JointState attacked = attach_ancilla_and_entangle(bell_state({0, 0}), h, h);
    CHECK_THROWS_AS(bell_measure(attacked, rng), StateError);
    CHECK_THROWS_AS(bell_measure(prepare_decoy(DecoyState::Zero), rng), StateError);
}

TEST_CASE("measure_qubit collapses the partner") {
    const auto z0 = measure_until(bell_state({0, 0}), Qubit::Transit, Basis::Z, 0);
    check_amplitudes(z0.state, {0, 0, 1, 0});  // home = 1, transit = 0

    const auto xp = measure_until(bell_state({0, 0}), Qubit::Transit, Basis::X, 0);
    CHECK(outcome_probability(xp.state, Qubit::Home, Basis::X, 0) == doctest::Approx(1.0));

    RandomStream rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        CHECK(measure_qubit(prepare_decoy(DecoyState::Plus), Qubit::Transit, Basis::X, rng).outcome == 0);
    }
}

TEST_CASE("measuring a missing qubit is an error") {
    RandomStream rng(1);
    CHECK_THROWS_AS(measure_qubit(bell_state({0, 0}), Qubit::Ancilla, Basis::Z, rng), StateError);
    CHECK_THROWS_AS(measure_qubit(prepare_decoy(DecoyState::One), Qubit::Home, Basis::Z, rng), StateError);
}

TEST_CASE("decoy preparation") {
    check_amplitudes(prepare_decoy(DecoyState::Zero), {1, 0});
    check_amplitudes(prepare_decoy(DecoyState::One), {0, 1});
    check_amplitudes(prepare_decoy(DecoyState::Plus), {h, h});
    check_amplitudes(prepare_decoy(DecoyState::Minus), {h, -h});
    CHECK(prepare_decoy(DecoyState::Plus).layout() == std::vector<Qubit>{Qubit::Transit});
    CHECK(decoy_basis(DecoyState::Minus) == Basis::X);
    CHECK(decoy_outcome(DecoyState::Minus) == 1);
    CHECK(decoy_basis(DecoyState::One) == Basis::Z);
}

TEST_CASE("attaching the ancilla") {
    const cd alpha{0.6, 0.0};
    const cd beta{0.0, 0.8};

    SUBCASE("pair state") {
        // alpha |Psi_00>|chi_0> + beta |Psi_10>|chi_1>, written out by hand.
        const JointState s = attach_ancilla_and_entangle(bell_state({0, 0}), alpha, beta);
        check_amplitudes(s, {0, beta * h, alpha * h, 0, alpha * h, 0, 0, beta * h});
    }
    SUBCASE("plus decoy factorizes") {
        const JointState s = attach_ancilla_and_entangle(prepare_decoy(DecoyState::Plus), alpha, beta);
        check_amplitudes(s, {h * alpha, h * beta, h * alpha, h * beta});
    }
    SUBCASE("zero decoy") {
        const JointState s = attach_ancilla_and_entangle(prepare_decoy(DecoyState::Zero), alpha, beta);
        check_amplitudes(s, {alpha, 0, 0, beta});
    }
    SUBCASE("identity attack") {
        RandomStream rng(9);
        const JointState base = random_pair_state(rng);
        const JointState s = attach_ancilla_and_entangle(base, 1.0, 0.0);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(s.amplitudes()[2 * i] - base.amplitudes()[i]) < 1e-12);
            CHECK(std::abs(s.amplitudes()[2 * i + 1]) < 1e-12);
        }
    }
}

TEST_CASE("attaching rejects bad amplitudes and a second ancilla") {
    CHECK_THROWS_AS(attach_ancilla_and_entangle(bell_state({0, 0}), 0.9, 0.9), std::invalid_argument);
    const JointState once = attach_ancilla_and_entangle(bell_state({0, 0}), h, h);
    CHECK_THROWS_AS(attach_ancilla_and_entangle(once, h, h), StateError);
}

TEST_CASE("state construction is validated") {
    CHECK_THROWS_AS(JointState(kPair, {1, 0}), StateError);
    CHECK_THROWS_AS(JointState(kPair, {1, 1, 0, 0}), StateError);
    CHECK_THROWS_AS(JointState({Qubit::Transit, Qubit::Home}, {1, 0, 0, 0}), StateError);
    CHECK_NOTHROW(JointState({Qubit::Transit}, {0, 1}));
}

TEST_CASE("discard_qubit needs a definite value") {
    RandomStream rng(4);
    CHECK_THROWS_AS(discard_qubit(bell_state({0, 0}), Qubit::Home), StateError);
    const auto m = measure_qubit(bell_state({0, 0}), Qubit::Home, Basis::Z, rng);
    const JointState t = discard_qubit(m.state, Qubit::Home);
    CHECK(t.layout() == std::vector<Qubit>{Qubit::Transit});
    CHECK(outcome_probability(t, Qubit::Transit, Basis::Z, Bit(1 - m.outcome)) == doctest::Approx(1.0));
}

TEST_CASE("property: operations preserve the norm") {
    RandomStream rng(2024);
    for (int rep = 0; rep < 500; ++rep) {
        JointState s = random_pair_state(rng);
        for (int step = 0; step < 6; ++step) {
            switch (rng.below(4)) {
            case 0:
                s = apply_pauli(s, rng.bit() ? Qubit::Home : Qubit::Transit, rng.bit() ? Pauli::X : Pauli::Z);
                break;
            case 1:
                s = measure_qubit(s, rng.bit() ? Qubit::Home : Qubit::Transit, rng.bit() ? Basis::X : Basis::Z, rng)
                        .state;
                break;
            case 2:
                s = bell_measure(s, rng).state;
                break;
            default: {
                const double b2 = rng.uniform();
                const JointState a = attach_ancilla_and_entangle(s, std::sqrt(1 - b2), std::sqrt(b2));
                CHECK(std::abs(a.norm_squared() - 1.0) < 1e-12);
                break;
            }
            }
            CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("property: encoding identity") {
    RandomStream rng(7);
    for (Bit j = 0; j < 2; ++j) {
        for (Bit k = 0; k < 2; ++k) {
            JointState s = bell_state({0, 0});
            if (j) {
                s = apply_pauli_on_transit(s, Pauli::X);
            }
            if (k) {
                s = apply_pauli_on_transit(s, Pauli::Z);
            }
            const auto p = bell_probabilities(s);
            CHECK(p[2 * j + k] == doctest::Approx(1.0));
            for (int rep = 0; rep < 50; ++rep) {
                CHECK(bell_measure(s, rng).label == BellLabel{j, k});
            }
        }
    }
}

TEST_CASE("property: Z anti-correlation and X correlation") {
    RandomStream rng(8);
    for (int rep = 0; rep < 2000; ++rep) {
        const Basis b = rep % 2 ? Basis::X : Basis::Z;
        const auto t = measure_qubit(bell_state({0, 0}), Qubit::Transit, b, rng);
        const auto a = measure_qubit(t.state, Qubit::Home, b, rng);
        if (b == Basis::Z) {
            CHECK(a.outcome != t.outcome);
        } else {
            CHECK(a.outcome == t.outcome);
        }
    }
}

TEST_CASE("property: X-family decoys survive any entangling amplitudes") {
    RandomStream rng(13);
    for (int rep = 0; rep < 300; ++rep) {
        const double b2 = rng.uniform();
        const double phase = 6.283185307179586 * rng.uniform();
        const cd alpha = std::sqrt(1 - b2);
        const cd beta = std::polar(std::sqrt(b2), phase);
        for (DecoyState d : {DecoyState::Plus, DecoyState::Minus}) {
            const JointState s = attach_ancilla_and_entangle(prepare_decoy(d), alpha, beta);
            CHECK(outcome_probability(s, Qubit::Transit, Basis::X, decoy_outcome(d)) == doctest::Approx(1.0));
            CHECK(measure_qubit(s, Qubit::Transit, Basis::X, rng).outcome == decoy_outcome(d));
        }
    }
}

TEST_CASE("property: the transit qubit alone is maximally mixed") {
    RandomStream rng(17);
    const int n = 20000;
    for (Bit r = 0; r < 2; ++r) {
        for (Bit s = 0; s < 2; ++s) {
            for (Basis b : {Basis::Z, Basis::X}) {
                CHECK(outcome_probability(bell_state({r, s}), Qubit::Transit, b, 0) == doctest::Approx(0.5));
                int zeros = 0;
                for (int rep = 0; rep < n; ++rep) {
                    zeros += measure_qubit(bell_state({r, s}), Qubit::Transit, b, rng).outcome == 0;
                }
                CHECK(std::abs(zeros / double(n) - 0.5) < 4 * std::sqrt(0.25 / n));
            }
        }
    }
}
