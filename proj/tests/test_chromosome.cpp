#include <doctest.h>

#include <json.hpp>

#include "qreg/chromosome.hpp"

using namespace qreg;

namespace {

Chromosome single_qubit(std::vector<int> gate_ids) {
    Chromosome c;
    c.n_gates = static_cast<int>(gate_ids.size());
    c.n_qubits = 1;
    c.genes = std::move(gate_ids);
    c.genes.resize(static_cast<std::size_t>(3 * c.n_gates), 0); // wire segments ignored
    return c;
}

Chromosome two_qubit(std::vector<int> gate_ids, std::vector<int> controls,
                     std::vector<int> targets) {
    Chromosome c;
    c.n_gates = static_cast<int>(gate_ids.size());
    c.n_qubits = 2;
    c.genes = std::move(gate_ids);
    c.genes.insert(c.genes.end(), controls.begin(), controls.end());
    c.genes.insert(c.genes.end(), targets.begin(), targets.end());
    return c;
}

} // namespace

TEST_CASE("the worked 1-qubit example decodes gate by gate") {
    // [2, 4, 1, 6, 5] -> RY(theta0), RX(x0), RX(theta1), RZ(x1), RY(x2)
    const CircuitSpec circuit = decode_chromosome(single_qubit({2, 4, 1, 6, 5}));
    REQUIRE(circuit.gates.size() == 5);
    CHECK(circuit.gates[0].kind == GateKind::RY);
    CHECK(circuit.gates[0].angles[0].kind == AngleSource::Kind::Trainable);
    CHECK(circuit.gates[0].angles[0].index == 0);
    CHECK(circuit.gates[1].kind == GateKind::RX);
    CHECK(circuit.gates[1].angles[0].kind == AngleSource::Kind::Feature);
    CHECK(circuit.gates[1].angles[0].index == 0);
    CHECK(circuit.gates[2].kind == GateKind::RX);
    CHECK(circuit.gates[2].angles[0].kind == AngleSource::Kind::Trainable);
    CHECK(circuit.gates[2].angles[0].index == 1);
    CHECK(circuit.gates[3].kind == GateKind::RZ);
    CHECK(circuit.gates[3].angles[0].kind == AngleSource::Kind::Feature);
    CHECK(circuit.gates[3].angles[0].index == 1);
    CHECK(circuit.gates[4].kind == GateKind::RY);
    CHECK(circuit.gates[4].angles[0].kind == AngleSource::Kind::Feature);
    CHECK(circuit.gates[4].angles[0].index == 2);
    CHECK(count_params(circuit) == 2);
}

TEST_CASE("gene 0 encodes no operation") {
    CHECK(decode_chromosome(single_qubit({0})).gates.empty());
    CHECK(decode_chromosome(two_qubit({0}, {1}, {0})).gates.empty());
}

TEST_CASE("two-qubit rule table") {
    // g=4 with control == target degenerates to the identity
    CHECK(decode_chromosome(two_qubit({4}, {1}, {1})).gates.empty());
    // g=4 with distinct wires is a CNOT
    {
        const CircuitSpec c = decode_chromosome(two_qubit({4}, {1}, {0}));
        REQUIRE(c.gates.size() == 1);
        CHECK(c.gates[0].kind == GateKind::CNOT);
        CHECK(c.gates[0].wires == std::vector<int>{1, 0});
    }
    // g=5..7: controlled trainable rotations, collapsing when c == t
    {
        const CircuitSpec c = decode_chromosome(two_qubit({5, 6, 7}, {0, 1, 1}, {1, 1, 0}));
        REQUIRE(c.gates.size() == 3);
        CHECK(c.gates[0].kind == GateKind::CRX);
        CHECK(c.gates[1].kind == GateKind::RY); // c == t
        CHECK(c.gates[1].wires == std::vector<int>{1});
        CHECK(c.gates[2].kind == GateKind::CRZ);
        CHECK(count_params(c) == 3);
    }
    // g=8..10: feature rotations on the target wire
    {
        const CircuitSpec c = decode_chromosome(two_qubit({8, 9, 10}, {0, 0, 0}, {1, 0, 1}));
        REQUIRE(c.gates.size() == 3);
        CHECK(c.gates[0].kind == GateKind::RX);
        CHECK(c.gates[0].angles[0].kind == AngleSource::Kind::Feature);
        CHECK(c.gates[1].kind == GateKind::RY);
        CHECK(c.gates[2].kind == GateKind::RZ);
        CHECK(count_params(c) == 0);
    }
    // g=11..13: controlled feature rotations, collapsing when c == t
    {
        const CircuitSpec c = decode_chromosome(two_qubit({11, 12, 13}, {0, 1, 0}, {1, 1, 1}));
        REQUIRE(c.gates.size() == 3);
        CHECK(c.gates[0].kind == GateKind::CRX);
        CHECK(c.gates[0].angles[0].kind == AngleSource::Kind::Feature);
        CHECK(c.gates[1].kind == GateKind::RY);
        CHECK(c.gates[2].kind == GateKind::CRZ);
    }
}

TEST_CASE("wire segments reduce modulo the qubit count") {
    const CircuitSpec c = decode_chromosome(two_qubit({4}, {7}, {2}));
    REQUIRE(c.gates.size() == 1);
    CHECK(c.gates[0].wires == std::vector<int>{1, 0}); // 7 mod 2, 2 mod 2
}

TEST_CASE("out-of-alphabet genes are rejected") {
    CHECK_THROWS_AS(decode_chromosome(single_qubit({7})), std::invalid_argument);
    CHECK_THROWS_AS(decode_chromosome(two_qubit({14}, {0}, {1})), std::invalid_argument);
    Chromosome bad = single_qubit({1});
    bad.genes[1] = -2;
    CHECK_THROWS_AS(decode_chromosome(bad), std::invalid_argument);
}

TEST_CASE("random chromosomes stay in their alphabets and are reproducible") {
    const Chromosome a = random_chromosome(120, 2, 99);
    const Chromosome b = random_chromosome(120, 2, 99);
    CHECK(a.genes == b.genes);
    CHECK(a.genes.size() == 360);
    for (int i = 0; i < a.n_gates; ++i) {
        CHECK(a.genes[static_cast<std::size_t>(i)] >= 0);
        CHECK(a.genes[static_cast<std::size_t>(i)] < 14);
    }
    for (int i = a.n_gates; i < 3 * a.n_gates; ++i) {
        CHECK(a.genes[static_cast<std::size_t>(i)] >= 0);
        CHECK(a.genes[static_cast<std::size_t>(i)] < 2);
    }

    const Chromosome c = random_chromosome(5, 1, 1);
    for (int i = 0; i < 5; ++i) CHECK(c.genes[static_cast<std::size_t>(i)] < 7);
    CHECK(random_chromosome(5, 1, 2).genes != c.genes); // different seed, different draw
}

TEST_CASE("decoding is deterministic") {
    const Chromosome c = random_chromosome(40, 2, 7);
    const CircuitSpec a = decode_chromosome(c);
    const CircuitSpec b = decode_chromosome(c);
    REQUIRE(a.gates.size() == b.gates.size());
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
        CHECK(a.gates[i].kind == b.gates[i].kind);
        CHECK(a.gates[i].wires == b.gates[i].wires);
    }
    CHECK(a.n_trainable == b.n_trainable);
}

TEST_CASE("decode is total over random in-alphabet chromosomes") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Chromosome c = random_chromosome(1 + static_cast<int>(seed % 60), seed % 2 ? 1 : 2, seed);
        CHECK_NOTHROW(decode_chromosome(c));
    }
}

TEST_CASE("chromosome JSON round-trip") {
    const Chromosome c = random_chromosome(10, 2, 5);
    nlohmann::json j;
    to_json(j, c);
    const Chromosome back = j.get<Chromosome>();
    CHECK(back.n_gates == c.n_gates);
    CHECK(back.n_qubits == c.n_qubits);
    CHECK(back.genes == c.genes);
}
