#pragma once

#include <json.hpp>
#include <vector>

#include "qreg/circuit.hpp"
#include "qreg/rng.hpp"

namespace qreg {

// Integer encoding of a circuit: three equal segments of length n_gates
// holding gate IDs, control wires and target wires. Control/target entries
// reduce modulo n_qubits when decoded; they are ignored for 1-qubit circuits.
struct Chromosome {
    int n_gates = 0;
    int n_qubits = 1;
    std::vector<int> genes; // length 3 * n_gates
};

// 7 symbols for one qubit, 14 when controlled operations are encodable.
int gate_id_alphabet_size(int n_qubits);

// Uniform draw per segment alphabet: gate IDs from the gate alphabet, wire
// segments from {0..n_qubits-1}.
int segment_alphabet_size(const Chromosome& chromosome, int position);

Chromosome random_chromosome(int n_gates, int n_qubits, std::uint64_t seed);
Chromosome random_chromosome(int n_gates, int n_qubits, Rng& rng);

CircuitSpec decode_chromosome(const Chromosome& chromosome);

void to_json(nlohmann::json& j, const Chromosome& c);
void from_json(const nlohmann::json& j, Chromosome& c);

} // namespace qreg
