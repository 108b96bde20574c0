#include "qreg/ansatz.hpp"

#include <stdexcept>

namespace qreg {

namespace {

void check_spec(const AnsatzSpec& spec, int feature_dim) {
    if (spec.layers < 1) throw std::invalid_argument("build_ansatz: layers must be >= 1");
    if (spec.qubits < 1) throw std::invalid_argument("build_ansatz: qubits must be >= 1");
    if (feature_dim < 1) throw std::invalid_argument("build_ansatz: feature_dim must be >= 1");
}

} // namespace

int ansatz_param_count(const AnsatzSpec& spec) {
    const int L = spec.layers;
    const int M = spec.qubits;
    switch (spec.family) {
    case AnsatzFamily::StronglyEntangling: return 3 * L * M;
    case AnsatzFamily::BasicEntangler: return L * M;
    case AnsatzFamily::SimplifiedTwoDesign: return M + 2 * L * (M - 1);
    }
    throw std::invalid_argument("ansatz_param_count: bad family");
}

CircuitSpec build_ansatz(const AnsatzSpec& spec, int feature_dim) {
    check_spec(spec, feature_dim);
    const int L = spec.layers;
    const int M = spec.qubits;

    std::vector<GateOp> gates;
    int next_param = 0;
    auto theta = [&next_param] { return AngleSource::trainable(next_param++); };
    auto embed_features = [&] {
        for (int j = 0; j < M; ++j)
            gates.push_back({GateKind::RZ, {j}, {AngleSource::feature(j % feature_dim)}});
    };

    switch (spec.family) {
    case AnsatzFamily::StronglyEntangling:
        for (int l = 0; l < L; ++l) {
            embed_features();
            for (int j = 0; j < M; ++j)
                gates.push_back({GateKind::Rot3, {j}, {theta(), theta(), theta()}});
            if (M >= 2) {
                // cyclic entangler; range sweeps 1..M-1 across layers
                const int r = (l % (M - 1)) + 1;
                for (int i = 0; i < M; ++i)
                    gates.push_back({GateKind::CNOT, {i, (i + r) % M}, {}});
            }
        }
        break;

    case AnsatzFamily::BasicEntangler:
        for (int l = 0; l < L; ++l) {
            embed_features();
            for (int j = 0; j < M; ++j) gates.push_back({GateKind::RX, {j}, {theta()}});
            if (M == 2) {
                gates.push_back({GateKind::CNOT, {0, 1}, {}}); // single CNOT per layer
            } else if (M >= 3) {
                for (int i = 0; i < M; ++i)
                    gates.push_back({GateKind::CNOT, {i, (i + 1) % M}, {}});
            }
        }
        break;

    case AnsatzFamily::SimplifiedTwoDesign:
        for (int l = 0; l < L; ++l) {
            embed_features();
            if (l == 0) {
                for (int j = 0; j < M; ++j) gates.push_back({GateKind::RY, {j}, {theta()}});
            }
            for (int start : {0, 1}) { // even block then odd block
                for (int i = start; i + 1 < M; i += 2) {
                    gates.push_back({GateKind::CZ, {i, i + 1}, {}});
                    gates.push_back({GateKind::RY, {i}, {theta()}});
                    gates.push_back({GateKind::RY, {i + 1}, {theta()}});
                }
            }
        }
        break;
    }

    return make_circuit(M, std::move(gates));
}

std::string family_name(AnsatzFamily family) {
    switch (family) {
    case AnsatzFamily::StronglyEntangling: return "StronglyEntanglingLayers";
    case AnsatzFamily::BasicEntangler: return "BasicEntanglerLayers";
    case AnsatzFamily::SimplifiedTwoDesign: return "SimplifiedTwoDesign";
    }
    return "?";
}

AnsatzFamily parse_family(const std::string& name) {
    if (name == "SEL" || name == "StronglyEntanglingLayers") return AnsatzFamily::StronglyEntangling;
    if (name == "BEL" || name == "BasicEntanglerLayers") return AnsatzFamily::BasicEntangler;
    if (name == "STD" || name == "SimplifiedTwoDesign") return AnsatzFamily::SimplifiedTwoDesign;
    throw std::invalid_argument("parse_family: unknown ansatz family '" + name + "'");
}

} // namespace qreg
