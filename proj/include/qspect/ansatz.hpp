#pragma once

#include <string>
#include <vector>

#include "qspect/state_vector.hpp"

namespace qspect {

enum class AnsatzFamily { Compact, LowDepth, Custom };

/// Parameterized trial circuit applied to |0...0>. Builders guarantee every
/// parameter index in [0, num_params) is used by at least one gate.
struct Ansatz {
    int num_qubits = 0;
    int num_params = 0;
    AnsatzFamily family = AnsatzFamily::Custom;
    std::vector<Gate> gates;
};

/// Checks gate indices and parameter indices against the declared sizes.
void validate(const Ansatz& ansatz);

/// Hardware-efficient layered circuit: rounds of RY and RZ rotation layers
/// separated by nearest-neighbor CZ chains, sized to exactly
/// params_per_qubit * num_qubits parameters (an odd params_per_qubit drops
/// the RZ layer of the final round).
Ansatz build_compact(int num_qubits, int params_per_qubit = 7);

/// Brick-wall circuit of nearest-neighbor two-qubit blocks, each block
/// CRY(a->b), CRZ(b->a), RY(a), RZ(b), truncated gate-by-gate to exactly
/// target_params parameters.
Ansatz build_lowdepth(int num_qubits, int target_params);

/// Single-qubit alternating RY/RZ chain with num_params rotations.
Ansatz build_rotation_chain(int num_params);

/// Parses the custom ansatz format: `qubits <n>` and `params <m>` headers,
/// then one gate per line (`RY q0 p3`, `CZ q0 q1`, `CRY q1 q2 p7`). Every
/// declared parameter must be used.
Ansatz parse_ansatz(const std::string& text);

/// Applies the circuit to |0...0> at the given parameter values.
StateVector evaluate(const Ansatz& ansatz, std::span<const double> theta);

/// d|phi>/d(theta_i), an unnormalized vector of amplitudes per radian.
struct DerivativeVector {
    int param_index = -1;
    std::vector<cplx> components;
};

/// Fourth-order central finite difference
/// [-phi(t+2h) + 8 phi(t+h) - 8 phi(t-h) + phi(t-2h)] / (12h).
DerivativeVector derivative_fd(const Ansatz& ansatz, std::span<const double> theta, int param,
                               double step = 1e-5);

/// Exact derivative: for each gate using the parameter, runs the circuit
/// with -(i/2) times the gate's generator inserted immediately before it,
/// and sums the resulting vectors.
DerivativeVector derivative_analytic(const Ansatz& ansatz, std::span<const double> theta,
                                     int param);

}  // namespace qspect
