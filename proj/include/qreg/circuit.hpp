#pragma once

#include <span>
#include <string>
#include <vector>

#include "qreg/statevector.hpp"

namespace qreg {

enum class GateKind {
    Identity,
    PauliX,
    Hadamard,
    RX,
    RY,
    RZ,
    Rot3, // RZ(a0) then RY(a1) then RZ(a2), applied in that order
    CNOT,
    CZ,
    CRX,
    CRY,
    CRZ,
};

int angle_arity(GateKind kind);      // 0, 1 or 3
bool is_controlled(GateKind kind);   // two-wire gates, control listed first
std::string gate_name(GateKind kind);

// Where a gate angle comes from at evaluation time.
struct AngleSource {
    enum class Kind { Trainable, Feature, Constant };

    Kind kind = Kind::Constant;
    int index = 0;      // trainable slot or feature index
    double value = 0.0; // radians, for Constant

    static AngleSource trainable(int idx) { return {Kind::Trainable, idx, 0.0}; }
    static AngleSource feature(int idx) { return {Kind::Feature, idx, 0.0}; }
    static AngleSource constant(double radians) { return {Kind::Constant, 0, radians}; }
};

struct GateOp {
    GateKind kind = GateKind::Identity;
    std::vector<int> wires;           // control first for controlled gates
    std::vector<AngleSource> angles;  // length == angle_arity(kind)
};

// Ordered gate list over a fixed register. Trainable angle indices are
// exactly 0..n_trainable-1 in gate order; feature indices resolve modulo the
// feature dimension when the circuit runs.
struct CircuitSpec {
    int n_qubits = 1;
    std::vector<GateOp> gates;
    int n_trainable = 0; // cached by make_circuit
};

// Validates wires, angle arities and the trainable-index ordering, and
// fills the n_trainable cache.
CircuitSpec make_circuit(int n_qubits, std::vector<GateOp> gates);

int count_params(const CircuitSpec& circuit);

// Single gate on an explicit state, angles already resolved to radians.
StateVector apply_gate(StateVector state, const GateOp& gate,
                       std::span<const double> resolved_angles);

StateVector run_circuit(const CircuitSpec& circuit, std::span<const double> params,
                        std::span<const double> features);

// d<Z_wire>/dparam for every trainable slot, exact (reverse statevector sweep).
std::vector<double> gradient_adjoint(const CircuitSpec& circuit, std::span<const double> params,
                                     std::span<const double> features, int wire);

// Same sweep, but also returns <Z_wire> from the shared forward pass; the
// training loop's inner call.
double expectation_and_gradient(const CircuitSpec& circuit, std::span<const double> params,
                                std::span<const double> features, int wire,
                                std::vector<double>& grad_out);

// expectation_z(run_circuit(...), wire); the regression output in [-1, 1]
double predict(const CircuitSpec& circuit, std::span<const double> params,
               std::span<const double> features, int wire);

} // namespace qreg
