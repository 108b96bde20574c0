#include <doctest.h>

#include <cmath>

#include "qreg/circuit.hpp"
#include "qreg/rng.hpp"
#include "qreg/statevector.hpp"

using namespace qreg;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
} // namespace

TEST_CASE("zero_state is the |0...0> basis state") {
    const StateVector one = zero_state(1);
    CHECK(one.size() == 2);
    CHECK(one.amplitude(0) == cplx{1.0, 0.0});
    CHECK(one.amplitude(1) == cplx{0.0, 0.0});

    const StateVector two = zero_state(2);
    CHECK(two.size() == 4);
    CHECK(two.amplitude(0) == cplx{1.0, 0.0});
    for (std::size_t i = 1; i < 4; ++i) CHECK(two.amplitude(i) == cplx{0.0, 0.0});

    CHECK_THROWS_AS(zero_state(0), std::invalid_argument);
}

TEST_CASE("Hadamard creates the equal superposition") {
    const GateOp h{GateKind::Hadamard, {0}, {}};
    const StateVector state = apply_gate(zero_state(1), h, {});
    CHECK(state.amplitude(0).real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(state.amplitude(1).real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(std::abs(state.amplitude(0).imag()) < 1e-15);
    CHECK(std::abs(state.amplitude(1).imag()) < 1e-15);
}

TEST_CASE("CNOT truth table") {
    // |q0 q1>: wire 0 is the most significant bit
    for (int in = 0; in < 4; ++in) {
        StateVector state = zero_state(2);
        state.set_amplitude(0, {0.0, 0.0});
        state.set_amplitude(static_cast<std::size_t>(in), {1.0, 0.0});
        const StateVector outst = apply_gate(std::move(state), {GateKind::CNOT, {0, 1}, {}}, {});
        const int expected[4] = {0, 1, 3, 2}; // 00->00, 01->01, 10->11, 11->10
        for (int b = 0; b < 4; ++b) {
            const double want = b == expected[in] ? 1.0 : 0.0;
            CHECK(std::abs(outst.amplitude(static_cast<std::size_t>(b)) - cplx{want, 0.0}) < 1e-15);
        }
    }
}

TEST_CASE("rotation by zero is the identity") {
    Rng rng(7);
    StateVector state = zero_state(1);
    const cplx before0{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const cplx before1{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double norm = std::sqrt(std::norm(before0) + std::norm(before1));
    state.set_amplitude(0, before0 / norm);
    state.set_amplitude(1, before1 / norm);
    for (GateKind kind : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
        const StateVector outst = apply_gate(state, {kind, {0}, {AngleSource::constant(0.0)}},
                                             std::vector<double>{0.0});
        CHECK(std::abs(outst.amplitude(0) - state.amplitude(0)) < 1e-15);
        CHECK(std::abs(outst.amplitude(1) - state.amplitude(1)) < 1e-15);
    }
}

TEST_CASE("expectation_z eigenstates and superposition") {
    const StateVector zero = zero_state(1);
    CHECK(expectation_z(zero, 0) == doctest::Approx(1.0));

    StateVector one = zero_state(1);
    one.set_amplitude(0, {0.0, 0.0});
    one.set_amplitude(1, {1.0, 0.0});
    CHECK(expectation_z(one, 0) == doctest::Approx(-1.0));

    const StateVector plus = apply_gate(zero_state(1), {GateKind::Hadamard, {0}, {}}, {});
    CHECK(expectation_z(plus, 0) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(expectation_z(zero, 1), std::invalid_argument);
}

TEST_CASE("expectation_z is insensitive to a global phase") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        StateVector state = zero_state(2);
        double norm = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            state.set_amplitude(i, {rng.uniform(-1, 1), rng.uniform(-1, 1)});
            norm += std::norm(state.amplitude(i));
        }
        state.scale(1.0 / std::sqrt(norm));
        const double phase = rng.uniform(0.0, 2.0 * kPi);
        StateVector rotated = state;
        rotated.scale(cplx{std::cos(phase), std::sin(phase)});
        for (int wire = 0; wire < 2; ++wire)
            CHECK(expectation_z(state, wire) ==
                  doctest::Approx(expectation_z(rotated, wire)).epsilon(1e-12));
    }
}

TEST_CASE("norm is preserved over many random gates") {
    Rng rng(42);
    StateVector state = zero_state(2);
    const GateKind kinds[] = {GateKind::PauliX, GateKind::Hadamard, GateKind::RX,
                              GateKind::RY,     GateKind::RZ,       GateKind::Rot3,
                              GateKind::CNOT,   GateKind::CZ,       GateKind::CRX,
                              GateKind::CRY,    GateKind::CRZ};
    for (int step = 0; step < 10000; ++step) {
        const GateKind kind = kinds[rng.uniform_below(11)];
        GateOp gate;
        gate.kind = kind;
        if (is_controlled(kind)) {
            const int c = static_cast<int>(rng.uniform_below(2));
            gate.wires = {c, 1 - c};
        } else {
            gate.wires = {static_cast<int>(rng.uniform_below(2))};
        }
        std::vector<double> angles;
        for (int a = 0; a < angle_arity(kind); ++a) angles.push_back(rng.uniform(-kPi, kPi));
        gate.angles.assign(static_cast<std::size_t>(angle_arity(kind)), AngleSource::constant(0.0));
        state = apply_gate(std::move(state), gate, angles);
        CHECK(std::abs(state.norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("controlled rotations leave the control-|0> subspace unchanged") {
    Rng rng(3);
    for (GateKind kind : {GateKind::CRX, GateKind::CRY, GateKind::CRZ}) {
        StateVector state = zero_state(2); // control wire 0 stays |0>
        const StateVector outst = apply_gate(state, {kind, {0, 1}, {AngleSource::constant(0.0)}},
                                             std::vector<double>{rng.uniform(-kPi, kPi)});
        CHECK(std::abs(outst.amplitude(0) - cplx{1.0, 0.0}) < 1e-14);
        CHECK(std::abs(outst.amplitude(1)) < 1e-14);
    }
}

TEST_CASE("apply_gate rejects bad wires and angle arity") {
    CHECK_THROWS_AS(apply_gate(zero_state(1), {GateKind::RX, {1}, {AngleSource::constant(0)}},
                               std::vector<double>{0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(zero_state(1), {GateKind::RX, {0}, {AngleSource::constant(0)}},
                               std::vector<double>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(zero_state(2), {GateKind::CNOT, {1, 1}, {}}, {}),
                    std::invalid_argument);
}
