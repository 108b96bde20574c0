#include "qreg/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qreg {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("StateVector: n_qubits must be >= 1");
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = cplx{1.0, 0.0};
}

void StateVector::check_wire(int wire) const {
    if (wire < 0 || wire >= n_qubits_)
        throw std::invalid_argument("StateVector: wire " + std::to_string(wire) + " out of range");
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
}

void StateVector::apply_1q(int wire, const cplx m[4]) {
    check_wire(wire);
    const std::size_t step = std::size_t{1} << (n_qubits_ - 1 - wire);
    const std::size_t n = amps_.size();
    for (std::size_t base = 0; base < n; base += 2 * step) {
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            const cplx a = amps_[i0];
            const cplx b = amps_[i1];
            amps_[i0] = m[0] * a + m[1] * b;
            amps_[i1] = m[2] * a + m[3] * b;
        }
    }
}

void StateVector::apply_controlled_1q(int control, int target, const cplx m[4],
                                      bool zero_when_control_low) {
    check_wire(control);
    check_wire(target);
    if (control == target)
        throw std::invalid_argument("StateVector: control and target must differ");
    const int cpos = n_qubits_ - 1 - control;
    const std::size_t cmask = std::size_t{1} << cpos;
    const std::size_t step = std::size_t{1} << (n_qubits_ - 1 - target);
    const std::size_t n = amps_.size();
    for (std::size_t base = 0; base < n; base += 2 * step) {
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            if (i0 & cmask) {
                const cplx a = amps_[i0];
                const cplx b = amps_[i1];
                amps_[i0] = m[0] * a + m[1] * b;
                amps_[i1] = m[2] * a + m[3] * b;
            } else if (zero_when_control_low) {
                amps_[i0] = cplx{0.0, 0.0};
                amps_[i1] = cplx{0.0, 0.0};
            }
        }
    }
}

void StateVector::apply_cz(int control, int target) {
    check_wire(control);
    check_wire(target);
    if (control == target)
        throw std::invalid_argument("StateVector: control and target must differ");
    const std::size_t cmask = std::size_t{1} << (n_qubits_ - 1 - control);
    const std::size_t tmask = std::size_t{1} << (n_qubits_ - 1 - target);
    const std::size_t n = amps_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cmask) && (i & tmask)) amps_[i] = -amps_[i];
    }
}

void StateVector::scale(cplx factor) {
    for (cplx& a : amps_) a *= factor;
}

StateVector zero_state(int n_qubits) {
    return StateVector(n_qubits);
}

double expectation_z(const StateVector& state, int wire) {
    if (wire < 0 || wire >= state.n_qubits())
        throw std::invalid_argument("expectation_z: wire out of range");
    const std::size_t mask = std::size_t{1} << (state.n_qubits() - 1 - wire);
    double value = 0.0;
    const auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        value += (i & mask) ? -p : p;
    }
    return value;
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner_product: size mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.amplitude(i)) * b.amplitude(i);
    return s;
}

} // namespace qreg
