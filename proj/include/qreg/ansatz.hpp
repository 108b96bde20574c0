#pragma once

#include <string>

#include "qreg/circuit.hpp"

namespace qreg {

enum class AnsatzFamily {
    StronglyEntangling, // Rot3 on all qubits + cyclic CNOTs, 3*L*M params
    BasicEntangler,     // RX on all qubits + CNOT ring, L*M params
    SimplifiedTwoDesign // RY init + CZ/RY brickwork, M + 2*L*(M-1) params
};

struct AnsatzSpec {
    AnsatzFamily family = AnsatzFamily::StronglyEntangling;
    int layers = 1; // L
    int qubits = 1; // M
};

// Closed-form trainable-parameter count for a family instance.
int ansatz_param_count(const AnsatzSpec& spec);

// Builds the circuit with per-layer data re-uploading: each of the L layers
// starts with RZ(feature j) on every qubit j, followed by one ansatz layer.
CircuitSpec build_ansatz(const AnsatzSpec& spec, int feature_dim);

std::string family_name(AnsatzFamily family);
AnsatzFamily parse_family(const std::string& name); // "SEL", "BEL", "STD" or full names

} // namespace qreg
