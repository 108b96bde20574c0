#include "qreg/chromosome.hpp"

#include <stdexcept>
#include <string>

namespace qreg {

int gate_id_alphabet_size(int n_qubits) {
    return n_qubits >= 2 ? 14 : 7;
}

int segment_alphabet_size(const Chromosome& chromosome, int position) {
    if (position < 0 || position >= 3 * chromosome.n_gates)
        throw std::invalid_argument("segment_alphabet_size: position out of range");
    if (position < chromosome.n_gates) return gate_id_alphabet_size(chromosome.n_qubits);
    return chromosome.n_qubits;
}

Chromosome random_chromosome(int n_gates, int n_qubits, Rng& rng) {
    if (n_gates < 1) throw std::invalid_argument("random_chromosome: n_gates must be >= 1");
    if (n_qubits < 1) throw std::invalid_argument("random_chromosome: n_qubits must be >= 1");
    Chromosome c;
    c.n_gates = n_gates;
    c.n_qubits = n_qubits;
    c.genes.resize(static_cast<std::size_t>(3 * n_gates));
    for (int pos = 0; pos < 3 * n_gates; ++pos)
        c.genes[static_cast<std::size_t>(pos)] =
            static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(segment_alphabet_size(c, pos))));
    return c;
}

Chromosome random_chromosome(int n_gates, int n_qubits, std::uint64_t seed) {
    Rng rng(seed);
    return random_chromosome(n_gates, n_qubits, rng);
}

namespace {

void check_genes(const Chromosome& c) {
    if (c.n_gates < 1) throw std::invalid_argument("decode_chromosome: n_gates must be >= 1");
    if (c.n_qubits < 1) throw std::invalid_argument("decode_chromosome: n_qubits must be >= 1");
    if (static_cast<int>(c.genes.size()) != 3 * c.n_gates)
        throw std::invalid_argument("decode_chromosome: genes length must be 3 * n_gates");
    const int id_max = gate_id_alphabet_size(c.n_qubits);
    for (int i = 0; i < c.n_gates; ++i) {
        const int g = c.genes[static_cast<std::size_t>(i)];
        if (g < 0 || g >= id_max)
            throw std::invalid_argument("decode_chromosome: gate ID " + std::to_string(g) +
                                        " outside alphabet {0.." + std::to_string(id_max - 1) + "}");
    }
    for (int i = c.n_gates; i < 3 * c.n_gates; ++i) {
        if (c.genes[static_cast<std::size_t>(i)] < 0)
            throw std::invalid_argument("decode_chromosome: negative wire gene");
    }
}

} // namespace

CircuitSpec decode_chromosome(const Chromosome& c) {
    check_genes(c);
    std::vector<GateOp> gates;
    gates.reserve(static_cast<std::size_t>(c.n_gates));
    int next_theta = 0;
    int next_feature = 0;
    auto theta = [&next_theta] { return AngleSource::trainable(next_theta++); };
    auto feat = [&next_feature] { return AngleSource::feature(next_feature++); };
    auto rot = [](int axis) { // 0->RX, 1->RY, 2->RZ
        return axis == 0 ? GateKind::RX : axis == 1 ? GateKind::RY : GateKind::RZ;
    };
    auto crot = [](int axis) {
        return axis == 0 ? GateKind::CRX : axis == 1 ? GateKind::CRY : GateKind::CRZ;
    };

    for (int i = 0; i < c.n_gates; ++i) {
        const int g = c.genes[static_cast<std::size_t>(i)];
        if (g == 0) continue;

        if (c.n_qubits == 1) {
            // 7-symbol alphabet: 1..3 trainable rotations, 4..6 feature rotations
            if (g <= 3)
                gates.push_back({rot(g - 1), {0}, {theta()}});
            else
                gates.push_back({rot(g - 4), {0}, {feat()}});
            continue;
        }

        const int control = c.genes[static_cast<std::size_t>(c.n_gates + i)] % c.n_qubits;
        const int target = c.genes[static_cast<std::size_t>(2 * c.n_gates + i)] % c.n_qubits;

        if (g <= 3) {
            gates.push_back({rot(g - 1), {target}, {theta()}});
        } else if (g == 4) {
            if (control != target) gates.push_back({GateKind::CNOT, {control, target}, {}});
            // control == target: CNOT degenerates, gate skipped
        } else if (g <= 7) {
            if (control != target)
                gates.push_back({crot(g - 5), {control, target}, {theta()}});
            else
                gates.push_back({rot(g - 5), {target}, {theta()}});
        } else if (g <= 10) {
            gates.push_back({rot(g - 8), {target}, {feat()}});
        } else {
            if (control != target)
                gates.push_back({crot(g - 11), {control, target}, {feat()}});
            else
                gates.push_back({rot(g - 11), {target}, {feat()}});
        }
    }
    return make_circuit(c.n_qubits, std::move(gates));
}

void to_json(nlohmann::json& j, const Chromosome& c) {
    j = nlohmann::json{{"n_gates", c.n_gates}, {"n_qubits", c.n_qubits}, {"genes", c.genes}};
}

void from_json(const nlohmann::json& j, Chromosome& c) {
    j.at("n_gates").get_to(c.n_gates);
    j.at("n_qubits").get_to(c.n_qubits);
    j.at("genes").get_to(c.genes);
}

} // namespace qreg
