#include <doctest.h>

#include <cmath>
#include <vector>

#include "qreg/circuit.hpp"
#include "qreg/rng.hpp"

using namespace qreg;

namespace {

constexpr double kPi = 3.14159265358979323846;

// random circuit over the full gate alphabet with mixed angle sources
CircuitSpec random_circuit(Rng& rng, int n_qubits, int max_gates) {
    const GateKind kinds[] = {GateKind::PauliX, GateKind::Hadamard, GateKind::RX,
                              GateKind::RY,     GateKind::RZ,       GateKind::Rot3,
                              GateKind::CNOT,   GateKind::CZ,       GateKind::CRX,
                              GateKind::CRY,    GateKind::CRZ};
    const int n_gates = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_gates)));
    std::vector<GateOp> gates;
    int next_trainable = 0;
    for (int i = 0; i < n_gates; ++i) {
        GateOp g;
        g.kind = kinds[rng.uniform_below(n_qubits >= 2 ? 11 : 6)];
        if (is_controlled(g.kind)) {
            const int c = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_qubits)));
            int t = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_qubits - 1)));
            if (t >= c) ++t;
            g.wires = {c, t};
        } else {
            g.wires = {static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_qubits)))};
        }
        for (int a = 0; a < angle_arity(g.kind); ++a) {
            const auto pick = rng.uniform_below(3);
            if (pick == 0)
                g.angles.push_back(AngleSource::trainable(next_trainable++));
            else if (pick == 1)
                g.angles.push_back(AngleSource::feature(static_cast<int>(rng.uniform_below(4))));
            else
                g.angles.push_back(AngleSource::constant(rng.uniform(-kPi, kPi)));
        }
        gates.push_back(std::move(g));
    }
    return make_circuit(n_qubits, std::move(gates));
}

// central finite differences on <Z_wire>, the independent gradient oracle
std::vector<double> finite_difference_gradient(const CircuitSpec& circuit,
                                               std::vector<double> params,
                                               const std::vector<double>& features, int wire,
                                               double h) {
    std::vector<double> grad(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double saved = params[k];
        params[k] = saved + h;
        const double up = predict(circuit, params, features, wire);
        params[k] = saved - h;
        const double down = predict(circuit, params, features, wire);
        params[k] = saved;
        grad[k] = (up - down) / (2.0 * h);
    }
    return grad;
}

} // namespace

TEST_CASE("empty circuit returns |0>") {
    const CircuitSpec circuit = make_circuit(1, {});
    const StateVector state = run_circuit(circuit, {}, std::vector<double>{0.5});
    CHECK(state.amplitude(0) == cplx{1.0, 0.0});
    CHECK(state.amplitude(1) == cplx{0.0, 0.0});
}

TEST_CASE("RX(pi) flips |0> to |1> up to the -i phase") {
    const CircuitSpec circuit =
        make_circuit(1, {{GateKind::RX, {0}, {AngleSource::trainable(0)}}});
    const StateVector state = run_circuit(circuit, std::vector<double>{kPi}, {});
    CHECK(std::abs(state.amplitude(0)) < 1e-15);
    CHECK(std::abs(state.amplitude(1) - cplx{0.0, -1.0}) < 1e-15);
}

TEST_CASE("RZ on |0> leaves probabilities unchanged") {
    const CircuitSpec circuit = make_circuit(1, {{GateKind::RZ, {0}, {AngleSource::feature(0)}}});
    const StateVector state = run_circuit(circuit, {}, std::vector<double>{1.234});
    CHECK(std::norm(state.amplitude(0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::norm(state.amplitude(1)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("params length must match the trainable count") {
    const CircuitSpec circuit =
        make_circuit(1, {{GateKind::RX, {0}, {AngleSource::trainable(0)}}});
    CHECK_THROWS_AS(run_circuit(circuit, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_circuit(circuit, std::vector<double>{0.1, 0.2}, {}),
                    std::invalid_argument);
}

TEST_CASE("feature indices wrap modulo the feature dimension") {
    // two feature gates with indices 0 and 2 over a 2-dim input: index 2 -> x0
    const CircuitSpec a = make_circuit(1, {{GateKind::RX, {0}, {AngleSource::feature(0)}},
                                           {GateKind::RY, {0}, {AngleSource::feature(2)}}});
    const CircuitSpec b = make_circuit(1, {{GateKind::RX, {0}, {AngleSource::feature(0)}},
                                           {GateKind::RY, {0}, {AngleSource::feature(0)}}});
    const std::vector<double> x{0.7, -0.3};
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::abs(run_circuit(a, {}, x).amplitude(i) - run_circuit(b, {}, x).amplitude(i)) <
              1e-15);
}

TEST_CASE("trainable indices must be consecutive in gate order") {
    CHECK_THROWS_AS(make_circuit(1, {{GateKind::RX, {0}, {AngleSource::trainable(1)}}}),
                    std::invalid_argument);
}

TEST_CASE("rotation additivity") {
    Rng rng(5);
    for (GateKind kind : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
        const double a = rng.uniform(-kPi, kPi);
        const double b = rng.uniform(-kPi, kPi);
        const CircuitSpec two = make_circuit(1, {{kind, {0}, {AngleSource::constant(a)}},
                                                 {kind, {0}, {AngleSource::constant(b)}}});
        const CircuitSpec one = make_circuit(1, {{kind, {0}, {AngleSource::constant(a + b)}}});
        const StateVector s2 = run_circuit(two, {}, {});
        const StateVector s1 = run_circuit(one, {}, {});
        for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(s2.amplitude(i) - s1.amplitude(i)) < 1e-12);
    }
}

TEST_CASE("adjoint gradient of a single RX matches the cos closed form") {
    const CircuitSpec circuit =
        make_circuit(1, {{GateKind::RX, {0}, {AngleSource::trainable(0)}}});
    // <Z> = cos(theta), d/dtheta = -sin(theta)
    const std::vector<double> g0 = gradient_adjoint(circuit, std::vector<double>{0.0}, {}, 0);
    CHECK(g0[0] == doctest::Approx(0.0).epsilon(1e-12));
    const std::vector<double> g1 = gradient_adjoint(circuit, std::vector<double>{kPi / 2}, {}, 0);
    CHECK(g1[0] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("adjoint gradients match central finite differences on random circuits") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int n_qubits = 1 + static_cast<int>(rng.uniform_below(2));
        const CircuitSpec circuit = random_circuit(rng, n_qubits, 30);
        std::vector<double> params(static_cast<std::size_t>(count_params(circuit)));
        for (double& p : params) p = rng.uniform(-kPi, kPi);
        std::vector<double> features{rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
        const int wire = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_qubits)));

        const std::vector<double> adj = gradient_adjoint(circuit, params, features, wire);
        const std::vector<double> fd =
            finite_difference_gradient(circuit, params, features, wire, 1e-5);
        REQUIRE(adj.size() == fd.size());
        for (std::size_t k = 0; k < adj.size(); ++k) {
            const double scale = std::max({1.0, std::abs(adj[k]), std::abs(fd[k])});
            CHECK(std::abs(adj[k] - fd[k]) / scale < 1e-6);
        }
    }
}

TEST_CASE("gradient of a feature-only circuit is empty") {
    const CircuitSpec circuit = make_circuit(1, {{GateKind::RX, {0}, {AngleSource::feature(0)}}});
    CHECK(gradient_adjoint(circuit, {}, std::vector<double>{0.3}, 0).empty());
}
