#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qreg {

using cplx = std::complex<double>;

// Dense statevector over n qubits. Wire 0 is the most significant bit of the
// basis index, so amplitudes read like the ket string |q0 q1 ... q_{n-1}>.
class StateVector {
  public:
    explicit StateVector(int n_qubits); // |0...0>

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return amps_.size(); }

    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amplitude(std::size_t i) const { return amps_[i]; }
    void set_amplitude(std::size_t i, cplx v) { amps_[i] = v; }

    double norm_sq() const;

    // apply a 2x2 matrix (row-major m[0]=m00, m[1]=m01, m[2]=m10, m[3]=m11)
    void apply_1q(int wire, const cplx m[4]);

    // apply a 2x2 matrix on `target` where `control` is |1>. When
    // `zero_when_control_low` is set, the control-|0> subspace is zeroed
    // instead of kept; that non-unitary mode backs gate-derivative sweeps.
    void apply_controlled_1q(int control, int target, const cplx m[4],
                             bool zero_when_control_low = false);

    void apply_cz(int control, int target);

    void scale(cplx factor);

  private:
    void check_wire(int wire) const;

    int n_qubits_;
    std::vector<cplx> amps_;
};

StateVector zero_state(int n_qubits);

// <psi| Z_wire |psi>, always in [-1, 1]
double expectation_z(const StateVector& state, int wire);

// <a|b>
cplx inner_product(const StateVector& a, const StateVector& b);

} // namespace qreg
