#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qspect/pauli.hpp"

namespace qspect {

struct SatLiteral {
    int var = 0;
    bool negated = false;
};

/// 3SAT instance: every clause has exactly three literals over distinct
/// variables. Variable i maps to qubit i; bit 1 means true.
struct SatFormula {
    int num_vars = 0;
    std::vector<std::array<SatLiteral, 3>> clauses;
};

/// Throws ValidationError if the formula breaks the shape above.
void validate(const SatFormula& f);

/// Parses DIMACS CNF (`c` comments, `p cnf <vars> <clauses>` header,
/// 0-terminated clauses). Clause width must be exactly 3.
SatFormula parse_cnf(const std::string& text);

/// DIMACS text for the formula, 1-based signed literals.
std::string to_dimacs(const SatFormula& f);

/// Number of clauses with all three literals false under the assignment
/// (bit v of `assignment` is the value of variable v).
int violated_clauses(const SatFormula& f, std::uint64_t assignment);

/// Number of satisfying assignments, evaluated 64 assignments per word.
/// Returns early once the count exceeds stop_above.
std::uint64_t count_solutions(const SatFormula& f,
                              std::uint64_t stop_above = ~std::uint64_t{0});

/// Diagonal Hamiltonian H = sum_j n_j |j><j| with n_j the violated-clause
/// count of assignment j. Terms hold the Pauli-Z expansion (each clause is a
/// projector onto its violating assignment, expanded into eight +-1/8 Z
/// products); the dense diagonal is attached as the fast path.
PauliSumHamiltonian sat_to_hamiltonian(const SatFormula& f);

/// Rejection-samples random 3-clause formulas until one has exactly one
/// satisfying assignment. Deterministic given the seed. Throws BudgetError
/// after max_attempts failures.
SatFormula generate_unique_3sat(int num_vars, int num_clauses, std::uint64_t seed,
                                int max_attempts = 100000);

}  // namespace qspect
