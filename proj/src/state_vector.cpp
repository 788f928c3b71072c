#include "qspect/state_vector.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qspect/errors.hpp"

namespace qspect {

PauliMasks pauli_masks(std::span<const PauliOp> ops, int num_qubits) {
    PauliMasks m;
    std::uint64_t seen = 0;
    for (const PauliOp& op : ops) {
        if (op.qubit < 0 || op.qubit >= num_qubits) {
            throw ValidationError("pauli qubit index " + std::to_string(op.qubit) +
                                  " out of range for " + std::to_string(num_qubits) + " qubits");
        }
        const std::uint64_t bit = std::uint64_t{1} << op.qubit;
        if (seen & bit) {
            throw ValidationError("duplicate qubit " + std::to_string(op.qubit) +
                                  " in pauli string");
        }
        seen |= bit;
        switch (op.p) {
            case Pauli::X: m.flip |= bit; break;
            case Pauli::Y: m.flip |= bit; m.phase |= bit; ++m.y_count; break;
            case Pauli::Z: m.phase |= bit; break;
        }
    }
    return m;
}

cplx i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

bool gate_is_parameterized(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::CRY:
        case GateKind::CRZ:
            return true;
        default:
            return false;
    }
}

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::CRY: return "CRY";
        case GateKind::CRZ: return "CRZ";
        case GateKind::CZ: return "CZ";
        case GateKind::CNOT: return "CNOT";
        case GateKind::H: return "H";
        case GateKind::X: return "X";
    }
    return "?";
}

Gate Gate::rx(int target, int param) { return {GateKind::RX, target, -1, param}; }
Gate Gate::ry(int target, int param) { return {GateKind::RY, target, -1, param}; }
Gate Gate::rz(int target, int param) { return {GateKind::RZ, target, -1, param}; }
Gate Gate::cry(int control, int target, int param) {
    return {GateKind::CRY, target, control, param};
}
Gate Gate::crz(int control, int target, int param) {
    return {GateKind::CRZ, target, control, param};
}
Gate Gate::cz(int a, int b) { return {GateKind::CZ, a, b, -1}; }
Gate Gate::cnot(int control, int target) { return {GateKind::CNOT, target, control, -1}; }
Gate Gate::h(int target) { return {GateKind::H, target, -1, -1}; }
Gate Gate::x(int target) { return {GateKind::X, target, -1, -1}; }

namespace {

bool gate_has_control(GateKind kind) {
    switch (kind) {
        case GateKind::CRY:
        case GateKind::CRZ:
        case GateKind::CZ:
        case GateKind::CNOT:
            return true;
        default:
            return false;
    }
}

}  // namespace

void validate_gate(const Gate& gate, int num_qubits) {
    const std::string name = gate_name(gate.kind);
    if (gate.target < 0 || gate.target >= num_qubits) {
        throw ValidationError(name + " target qubit " + std::to_string(gate.target) +
                              " out of range for " + std::to_string(num_qubits) + " qubits");
    }
    if (gate_has_control(gate.kind)) {
        if (gate.control < 0 || gate.control >= num_qubits) {
            throw ValidationError(name + " control qubit " + std::to_string(gate.control) +
                                  " out of range for " + std::to_string(num_qubits) + " qubits");
        }
        if (gate.control == gate.target) {
            throw ValidationError(name + " control and target coincide on qubit " +
                                  std::to_string(gate.target));
        }
    } else if (gate.control != -1) {
        throw ValidationError(name + " does not take a control qubit");
    }
    if (gate_is_parameterized(gate.kind)) {
        if (gate.parameter_index < 0) {
            throw ValidationError(name + " requires a parameter index");
        }
    } else if (gate.parameter_index != -1) {
        throw ValidationError(name + " is not parameterized");
    }
}

Mat2 gate_matrix(GateKind kind, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    switch (kind) {
        case GateKind::RX:
            return {{c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0}};
        case GateKind::RY:
        case GateKind::CRY:
            return {{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}};
        case GateKind::RZ:
        case GateKind::CRZ:
            return {{c, -s}, {0.0, 0.0}, {0.0, 0.0}, {c, s}};
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            return {{r, 0.0}, {r, 0.0}, {r, 0.0}, {-r, 0.0}};
        }
        case GateKind::X:
        case GateKind::CNOT:
            return {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
        case GateKind::CZ:
            break;
    }
    throw ValidationError("CZ has no single-qubit block");
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw CapacityError("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(std::uint64_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = cplx{1.0, 0.0};
}

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw CapacityError("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    if (amps_.size() != (std::uint64_t{1} << num_qubits)) {
        throw ValidationError("amplitude array length " + std::to_string(amps_.size()) +
                              " does not match 2^" + std::to_string(num_qubits));
    }
}

void StateVector::apply(const Gate& gate, double theta) {
    validate_gate(gate, num_qubits_);
    switch (gate.kind) {
        case GateKind::CZ:
            kernels::apply_cz(amps_, gate.target, gate.control);
            return;
        case GateKind::CRY:
        case GateKind::CRZ:
        case GateKind::CNOT:
            kernels::apply_controlled_1q(amps_, gate.control, gate.target,
                                         gate_matrix(gate.kind, theta));
            return;
        default:
            kernels::apply_1q(amps_, gate.target, gate_matrix(gate.kind, theta));
            return;
    }
}

void StateVector::apply_pauli_string(std::span<const PauliOp> ops) {
    if (ops.empty()) return;
    const PauliMasks m = pauli_masks(ops, num_qubits_);
    std::vector<cplx> out(amps_.size());
    kernels::pauli_apply(amps_, out, m.flip, m.phase, i_power(m.y_count));
    amps_ = std::move(out);
}

double StateVector::norm_sq() const { return kernels::norm_sq(amps_); }

double StateVector::norm() const { return std::sqrt(norm_sq()); }

void StateVector::normalize() {
    const double n = norm();
    if (n < 1e-300) throw NumericError("cannot normalize a zero state vector");
    kernels::scale(amps_, cplx{1.0 / n, 0.0});
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ValidationError("inner product dimension mismatch: " +
                              std::to_string(a.num_qubits()) + " vs " +
                              std::to_string(b.num_qubits()) + " qubits");
    }
    return kernels::inner(a.amps(), b.amps());
}

}  // namespace qspect
