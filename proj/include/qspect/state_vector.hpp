#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qspect/kernels.hpp"

namespace qspect {

enum class Pauli { X, Y, Z };

/// One factor of a Pauli product, e.g. (2, Pauli::Y) for Y on qubit 2.
struct PauliOp {
    int qubit;
    Pauli p;
};

/// Bit-mask encoding of a Pauli product P = prod_q sigma_q acting on basis
/// states as P|s> = i^y_count * (-1)^popcount(s & phase) |s ^ flip>.
struct PauliMasks {
    std::uint64_t flip = 0;   // X and Y factors
    std::uint64_t phase = 0;  // Y and Z factors
    int y_count = 0;
};

/// Validates that qubit indices are distinct and in [0, num_qubits).
PauliMasks pauli_masks(std::span<const PauliOp> ops, int num_qubits);

/// i^k for k taken mod 4.
cplx i_power(int k);

enum class GateKind { RX, RY, RZ, CRY, CRZ, CZ, CNOT, H, X };

bool gate_is_parameterized(GateKind kind);
const char* gate_name(GateKind kind);

/// One circuit element. Parameterized kinds (RX/RY/RZ/CRY/CRZ) read their
/// angle from theta[parameter_index] when a circuit is evaluated; fixed kinds
/// carry parameter_index = -1. Rotations follow the exp(-i theta G / 2)
/// convention, so e.g. RY(pi)|0> = |1>.
struct Gate {
    GateKind kind;
    int target = -1;
    int control = -1;          // second qubit for CZ/CNOT/controlled rotations
    int parameter_index = -1;

    static Gate rx(int target, int param);
    static Gate ry(int target, int param);
    static Gate rz(int target, int param);
    static Gate cry(int control, int target, int param);
    static Gate crz(int control, int target, int param);
    static Gate cz(int a, int b);
    static Gate cnot(int control, int target);
    static Gate h(int target);
    static Gate x(int target);
};

/// Throws ValidationError if indices are out of range, coincide, or the
/// parameter index is inconsistent with the gate kind.
void validate_gate(const Gate& gate, int num_qubits);

/// 2x2 unitary of a single-qubit kind (the rotation block for controlled
/// rotations). theta is ignored for fixed kinds.
Mat2 gate_matrix(GateKind kind, double theta);

/// Dense n-qubit pure state. Qubit 0 is the least-significant bit of the
/// amplitude index.
class StateVector {
  public:
    static constexpr int kMaxQubits = 24;

    /// |0...0> on num_qubits qubits. Throws CapacityError outside [1, 24].
    explicit StateVector(int num_qubits);

    /// Takes ownership of explicit amplitudes; size must be 2^num_qubits.
    StateVector(int num_qubits, std::vector<cplx> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }

    std::span<cplx> amps() { return amps_; }
    std::span<const cplx> amps() const { return amps_; }

    cplx& operator[](std::uint64_t k) { return amps_[k]; }
    const cplx& operator[](std::uint64_t k) const { return amps_[k]; }

    /// Applies the gate in place. theta is the rotation angle for
    /// parameterized kinds and is ignored for fixed kinds.
    void apply(const Gate& gate, double theta = 0.0);

    /// Applies prod sigma in place. Empty list is the identity.
    void apply_pauli_string(std::span<const PauliOp> ops);

    double norm_sq() const;
    double norm() const;

    /// Rescales to unit norm. Throws NumericError on a (near-)zero vector.
    void normalize();

  private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

/// sum conj(a_k) b_k. Throws ValidationError on dimension mismatch.
cplx inner_product(const StateVector& a, const StateVector& b);

}  // namespace qspect
