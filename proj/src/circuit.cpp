#include "qreg/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace qreg {

int angle_arity(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
        return 1;
    case GateKind::Rot3:
        return 3;
    default:
        return 0;
    }
}

bool is_controlled(GateKind kind) {
    switch (kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
        return true;
    default:
        return false;
    }
}

std::string gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::Identity: return "I";
    case GateKind::PauliX: return "X";
    case GateKind::Hadamard: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::Rot3: return "Rot";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
    }
    return "?";
}

namespace {

// Flattened primitive: at most one angle, Rot3 expanded to RZ/RY/RZ.
struct Prim {
    GateKind kind;
    int w0; // wire, or control for two-wire gates
    int w1; // target for two-wire gates
    double angle;
    int param_slot; // trainable slot feeding the angle, or -1
};

void rotation_matrix(GateKind kind, double theta, cplx m[4]) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
        m[0] = {c, 0.0}; m[1] = {0.0, -s};
        m[2] = {0.0, -s}; m[3] = {c, 0.0};
        break;
    case GateKind::RY:
    case GateKind::CRY:
        m[0] = {c, 0.0}; m[1] = {-s, 0.0};
        m[2] = {s, 0.0}; m[3] = {c, 0.0};
        break;
    case GateKind::RZ:
    case GateKind::CRZ:
        m[0] = {c, -s}; m[1] = {0.0, 0.0};
        m[2] = {0.0, 0.0}; m[3] = {c, s};
        break;
    default:
        throw std::invalid_argument("rotation_matrix: not a rotation gate");
    }
}

// d/dtheta of the rotation matrix
void rotation_derivative(GateKind kind, double theta, cplx m[4]) {
    const double c = 0.5 * std::cos(theta / 2.0);
    const double s = 0.5 * std::sin(theta / 2.0);
    switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
        m[0] = {-s, 0.0}; m[1] = {0.0, -c};
        m[2] = {0.0, -c}; m[3] = {-s, 0.0};
        break;
    case GateKind::RY:
    case GateKind::CRY:
        m[0] = {-s, 0.0}; m[1] = {-c, 0.0};
        m[2] = {c, 0.0}; m[3] = {-s, 0.0};
        break;
    case GateKind::RZ:
    case GateKind::CRZ:
        m[0] = {-s, -c}; m[1] = {0.0, 0.0};
        m[2] = {0.0, 0.0}; m[3] = {-s, c};
        break;
    default:
        throw std::invalid_argument("rotation_derivative: not a rotation gate");
    }
}

void apply_prim(StateVector& state, const Prim& p, bool inverse) {
    const double sign = inverse ? -1.0 : 1.0;
    cplx m[4];
    switch (p.kind) {
    case GateKind::Identity:
        return;
    case GateKind::PauliX:
        m[0] = {0.0, 0.0}; m[1] = {1.0, 0.0}; m[2] = {1.0, 0.0}; m[3] = {0.0, 0.0};
        state.apply_1q(p.w0, m);
        return;
    case GateKind::Hadamard: {
        const double h = 1.0 / std::sqrt(2.0);
        m[0] = {h, 0.0}; m[1] = {h, 0.0}; m[2] = {h, 0.0}; m[3] = {-h, 0.0};
        state.apply_1q(p.w0, m);
        return;
    }
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        rotation_matrix(p.kind, sign * p.angle, m);
        state.apply_1q(p.w0, m);
        return;
    case GateKind::CNOT:
        m[0] = {0.0, 0.0}; m[1] = {1.0, 0.0}; m[2] = {1.0, 0.0}; m[3] = {0.0, 0.0};
        state.apply_controlled_1q(p.w0, p.w1, m);
        return;
    case GateKind::CZ:
        state.apply_cz(p.w0, p.w1);
        return;
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
        rotation_matrix(p.kind, sign * p.angle, m);
        state.apply_controlled_1q(p.w0, p.w1, m);
        return;
    case GateKind::Rot3:
        break;
    }
    throw std::invalid_argument("apply_prim: unexpected gate kind");
}

// Applies dU/dtheta; zeroes the control-|0> subspace for controlled rotations.
void apply_prim_derivative(StateVector& state, const Prim& p) {
    cplx m[4];
    rotation_derivative(p.kind, p.angle, m);
    switch (p.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        state.apply_1q(p.w0, m);
        return;
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
        state.apply_controlled_1q(p.w0, p.w1, m, /*zero_when_control_low=*/true);
        return;
    default:
        throw std::invalid_argument("apply_prim_derivative: gate has no angle");
    }
}

double resolve_angle(const AngleSource& src, std::span<const double> params,
                     std::span<const double> features) {
    switch (src.kind) {
    case AngleSource::Kind::Trainable:
        return params[static_cast<std::size_t>(src.index)];
    case AngleSource::Kind::Feature:
        if (features.empty())
            throw std::invalid_argument("resolve_angle: feature gate but no features given");
        return features[static_cast<std::size_t>(src.index) % features.size()];
    case AngleSource::Kind::Constant:
        return src.value;
    }
    throw std::invalid_argument("resolve_angle: bad source");
}

int param_slot_of(const AngleSource& src) {
    return src.kind == AngleSource::Kind::Trainable ? src.index : -1;
}

std::vector<Prim> flatten(const CircuitSpec& circuit, std::span<const double> params,
                          std::span<const double> features) {
    std::vector<Prim> prims;
    prims.reserve(circuit.gates.size() + 2 * static_cast<std::size_t>(circuit.n_trainable));
    for (const GateOp& g : circuit.gates) {
        if (g.kind == GateKind::Identity) continue;
        if (g.kind == GateKind::Rot3) {
            static constexpr GateKind seq[3] = {GateKind::RZ, GateKind::RY, GateKind::RZ};
            for (int i = 0; i < 3; ++i) {
                prims.push_back({seq[i], g.wires[0], -1,
                                 resolve_angle(g.angles[i], params, features),
                                 param_slot_of(g.angles[i])});
            }
            continue;
        }
        Prim p;
        p.kind = g.kind;
        p.w0 = g.wires[0];
        p.w1 = g.wires.size() > 1 ? g.wires[1] : -1;
        p.angle = 0.0;
        p.param_slot = -1;
        if (angle_arity(g.kind) == 1) {
            p.angle = resolve_angle(g.angles[0], params, features);
            p.param_slot = param_slot_of(g.angles[0]);
        }
        prims.push_back(p);
    }
    return prims;
}

void validate_gate(int n_qubits, const GateOp& g) {
    const std::size_t want_wires = is_controlled(g.kind) ? 2 : 1;
    if (g.wires.size() != want_wires)
        throw std::invalid_argument(gate_name(g.kind) + ": expected " +
                                    std::to_string(want_wires) + " wire(s)");
    for (int w : g.wires) {
        if (w < 0 || w >= n_qubits)
            throw std::invalid_argument(gate_name(g.kind) + ": wire " + std::to_string(w) +
                                        " out of range for " + std::to_string(n_qubits) +
                                        " qubit(s)");
    }
    if (is_controlled(g.kind) && g.wires[0] == g.wires[1])
        throw std::invalid_argument(gate_name(g.kind) + ": control equals target");
    if (static_cast<int>(g.angles.size()) != angle_arity(g.kind))
        throw std::invalid_argument(gate_name(g.kind) + ": expected " +
                                    std::to_string(angle_arity(g.kind)) + " angle(s), got " +
                                    std::to_string(g.angles.size()));
}

} // namespace

CircuitSpec make_circuit(int n_qubits, std::vector<GateOp> gates) {
    if (n_qubits < 1) throw std::invalid_argument("make_circuit: n_qubits must be >= 1");
    int next_trainable = 0;
    for (const GateOp& g : gates) {
        validate_gate(n_qubits, g);
        for (const AngleSource& a : g.angles) {
            if (a.kind == AngleSource::Kind::Trainable) {
                if (a.index != next_trainable)
                    throw std::invalid_argument(
                        "make_circuit: trainable indices must be consecutive in gate order");
                ++next_trainable;
            } else if (a.kind == AngleSource::Kind::Feature && a.index < 0) {
                throw std::invalid_argument("make_circuit: negative feature index");
            }
        }
    }
    CircuitSpec spec;
    spec.n_qubits = n_qubits;
    spec.gates = std::move(gates);
    spec.n_trainable = next_trainable;
    return spec;
}

int count_params(const CircuitSpec& circuit) {
    return circuit.n_trainable;
}

StateVector apply_gate(StateVector state, const GateOp& gate,
                       std::span<const double> resolved_angles) {
    validate_gate(state.n_qubits(), gate);
    if (static_cast<int>(resolved_angles.size()) != angle_arity(gate.kind))
        throw std::invalid_argument("apply_gate: wrong number of resolved angles");
    if (gate.kind == GateKind::Rot3) {
        static constexpr GateKind seq[3] = {GateKind::RZ, GateKind::RY, GateKind::RZ};
        for (int i = 0; i < 3; ++i)
            apply_prim(state, {seq[i], gate.wires[0], -1, resolved_angles[i], -1}, false);
        return state;
    }
    Prim p{gate.kind, gate.wires[0], gate.wires.size() > 1 ? gate.wires[1] : -1,
           resolved_angles.empty() ? 0.0 : resolved_angles[0], -1};
    apply_prim(state, p, false);
    return state;
}

StateVector run_circuit(const CircuitSpec& circuit, std::span<const double> params,
                        std::span<const double> features) {
    if (static_cast<int>(params.size()) != circuit.n_trainable)
        throw std::invalid_argument("run_circuit: expected " +
                                    std::to_string(circuit.n_trainable) + " params, got " +
                                    std::to_string(params.size()));
    StateVector state(circuit.n_qubits);
    for (const Prim& p : flatten(circuit, params, features)) apply_prim(state, p, false);
    return state;
}

double expectation_and_gradient(const CircuitSpec& circuit, std::span<const double> params,
                                std::span<const double> features, int wire,
                                std::vector<double>& grad_out) {
    if (static_cast<int>(params.size()) != circuit.n_trainable)
        throw std::invalid_argument("gradient_adjoint: params length mismatch");
    if (wire < 0 || wire >= circuit.n_qubits)
        throw std::invalid_argument("gradient_adjoint: wire out of range");

    const std::vector<Prim> prims = flatten(circuit, params, features);

    StateVector psi(circuit.n_qubits);
    for (const Prim& p : prims) apply_prim(psi, p, false);
    const double value = expectation_z(psi, wire);

    // lambda = Z_wire |psi>
    StateVector lambda = psi;
    static const cplx pauli_z[4] = {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}};
    lambda.apply_1q(wire, pauli_z);

    // Reverse sweep: with psi_{k-1} = U_{k-1}...U_1|0> and
    // lambda_k = U_{k+1}^dag ... U_n^dag Z psi_n,
    // d<Z>/dtheta_k = 2 Re <lambda_k| dU_k |psi_{k-1}>.
    grad_out.assign(static_cast<std::size_t>(circuit.n_trainable), 0.0);
    for (std::size_t idx = prims.size(); idx-- > 0;) {
        const Prim& p = prims[idx];
        apply_prim(psi, p, /*inverse=*/true);
        if (p.param_slot >= 0) {
            StateVector mu = psi;
            apply_prim_derivative(mu, p);
            grad_out[static_cast<std::size_t>(p.param_slot)] +=
                2.0 * inner_product(lambda, mu).real();
        }
        apply_prim(lambda, p, /*inverse=*/true);
    }
    return value;
}

std::vector<double> gradient_adjoint(const CircuitSpec& circuit, std::span<const double> params,
                                     std::span<const double> features, int wire) {
    std::vector<double> grads;
    expectation_and_gradient(circuit, params, features, wire, grads);
    return grads;
}

double predict(const CircuitSpec& circuit, std::span<const double> params,
               std::span<const double> features, int wire) {
    return expectation_z(run_circuit(circuit, params, features), wire);
}

} // namespace qreg
