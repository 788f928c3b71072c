#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qspect/linalg.hpp"
#include "qspect/state_vector.hpp"

namespace qspect {

/// One weighted Pauli product. Masks are precomputed from ops at
/// construction: P|s> = i^y_count (-1)^popcount(s & phase) |s ^ flip>.
struct PauliTerm {
    double coefficient = 0.0;
    std::vector<PauliOp> ops;  // strictly increasing qubit indices
    std::uint64_t flip = 0;
    std::uint64_t phase = 0;
    int y_count = 0;
};

/// H = sum_j h_j prod_i sigma_i with real coefficients. Optionally carries a
/// precomputed dense diagonal when every term is made of Z factors only (the
/// 3SAT compiler populates it); expectation and apply use it as a fast path.
class PauliSumHamiltonian {
  public:
    /// Canonicalizes: validates op lists, sorts terms, merges duplicates.
    PauliSumHamiltonian(int num_qubits, std::vector<PauliTerm> terms);
    PauliSumHamiltonian(int num_qubits, std::vector<PauliTerm> terms,
                        std::vector<double> diagonal);

    int num_qubits() const { return num_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    bool has_diagonal() const { return !diagonal_.empty(); }
    std::span<const double> diagonal() const { return diagonal_; }

    /// <state| H |state>. The imaginary part of the raw term sum must vanish
    /// to 1e-10 (it does for real coefficients); NumericError otherwise.
    double expectation(const StateVector& state) const;

    /// H|state> as a new (generally unnormalized) vector of amplitudes.
    std::vector<cplx> apply(const StateVector& state) const;
    void apply(std::span<const cplx> in, std::span<cplx> out) const;

  private:
    int num_qubits_;
    std::vector<PauliTerm> terms_;
    std::vector<double> diagonal_;
};

/// Parses the Pauli-sum text format: a `qubits <n>` header, then one term
/// per line as `<coefficient> [<P><index>]*` with P in {X,Y,Z} and strictly
/// increasing indices. Blank lines and lines starting with `#` are skipped.
PauliSumHamiltonian parse_pauli_sum(const std::string& text);

/// Canonical text form; parse_pauli_sum(serialize(h)) reproduces h exactly.
std::string serialize(const PauliSumHamiltonian& h);

/// Dense 2^n x 2^n matrix of H. Throws CapacityError above 12 qubits.
ComplexMatrix materialize_dense(const PauliSumHamiltonian& h);

/// Hd + sum_j alphas[j] |states[j]><states[j]|.
ComplexMatrix deflate_dense(const ComplexMatrix& hd, std::span<const StateVector> states,
                            std::span<const double> alphas);

/// Ascending exact spectrum: the sorted diagonal when the fast path is
/// present, otherwise eigh(materialize_dense(h)).
std::vector<double> exact_eigenvalues(const PauliSumHamiltonian& h);

}  // namespace qspect
