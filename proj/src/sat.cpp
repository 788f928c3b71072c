#include "qspect/sat.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>

#include "qspect/errors.hpp"
#include "qspect/rng.hpp"

namespace qspect {

namespace {

constexpr int kMaxSatVars = 24;

struct ClauseMasks {
    std::uint64_t vars = 0;     // bits of the three variables
    std::uint64_t pattern = 0;  // assignment restricted to vars that violates
};

ClauseMasks clause_masks(const std::array<SatLiteral, 3>& clause) {
    ClauseMasks m;
    for (const SatLiteral& lit : clause) {
        const std::uint64_t bit = std::uint64_t{1} << lit.var;
        m.vars |= bit;
        // A positive literal is false on 0, a negated one is false on 1.
        if (lit.negated) m.pattern |= bit;
    }
    return m;
}

}  // namespace

void validate(const SatFormula& f) {
    if (f.num_vars < 1 || f.num_vars > kMaxSatVars) {
        throw ValidationError("variable count " + std::to_string(f.num_vars) + " outside [1, " +
                              std::to_string(kMaxSatVars) + "]");
    }
    for (const auto& clause : f.clauses) {
        for (const SatLiteral& lit : clause) {
            if (lit.var < 0 || lit.var >= f.num_vars) {
                throw ValidationError("literal variable " + std::to_string(lit.var) +
                                      " out of range");
            }
        }
        if (clause[0].var == clause[1].var || clause[0].var == clause[2].var ||
            clause[1].var == clause[2].var) {
            throw ValidationError("clause has a repeated variable");
        }
    }
}

SatFormula parse_cnf(const std::string& text) {
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    int declared_clauses = 0;
    SatFormula f;
    std::vector<SatLiteral> pending;

    while (std::getline(stream, raw)) {
        ++line_no;
        std::istringstream line(raw);
        std::string tok;
        if (!(line >> tok)) continue;
        if (tok[0] == 'c') continue;

        if (tok == "p") {
            if (have_header) throw ParseError("duplicate problem line", line_no);
            std::string fmt;
            if (!(line >> fmt) || fmt != "cnf") {
                throw ParseError("expected 'p cnf <vars> <clauses>'", line_no);
            }
            long nv = 0;
            long nc = 0;
            if (!(line >> nv >> nc) || nv < 1 || nv > kMaxSatVars || nc < 0) {
                throw ParseError("invalid problem line counts", line_no);
            }
            std::string extra;
            if (line >> extra) throw ParseError("unexpected token '" + extra + "'", line_no);
            f.num_vars = static_cast<int>(nv);
            declared_clauses = static_cast<int>(nc);
            have_header = true;
            continue;
        }

        if (!have_header) throw ParseError("clause before problem line", line_no);
        do {
            char* end = nullptr;
            const long lit = std::strtol(tok.c_str(), &end, 10);
            if (end != tok.c_str() + tok.size()) {
                throw ParseError("malformed literal '" + tok + "'", line_no);
            }
            if (lit == 0) {
                if (pending.size() != 3) {
                    throw ParseError("clause width " + std::to_string(pending.size()) +
                                     ", expected 3",
                                     line_no);
                }
                if (static_cast<int>(f.clauses.size()) == declared_clauses) {
                    throw ParseError("more clauses than declared", line_no);
                }
                if (pending[0].var == pending[1].var || pending[0].var == pending[2].var ||
                    pending[1].var == pending[2].var) {
                    throw ParseError("clause has a repeated variable", line_no);
                }
                f.clauses.push_back({pending[0], pending[1], pending[2]});
                pending.clear();
            } else {
                const long var = std::labs(lit) - 1;
                if (var >= f.num_vars) {
                    throw ParseError("variable " + std::to_string(std::labs(lit)) +
                                     " out of declared range",
                                     line_no);
                }
                pending.push_back({static_cast<int>(var), lit < 0});
            }
        } while (line >> tok);
    }

    if (!have_header) throw ParseError("missing problem line", line_no + 1);
    if (!pending.empty()) throw ParseError("unterminated clause at end of input", line_no);
    if (static_cast<int>(f.clauses.size()) != declared_clauses) {
        throw ParseError("declared " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(f.clauses.size()),
                         line_no);
    }
    validate(f);
    return f;
}

std::string to_dimacs(const SatFormula& f) {
    std::string out = "p cnf " + std::to_string(f.num_vars) + " " +
                      std::to_string(f.clauses.size()) + "\n";
    for (const auto& clause : f.clauses) {
        for (const SatLiteral& lit : clause) {
            out += std::to_string(lit.negated ? -(lit.var + 1) : lit.var + 1);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

int violated_clauses(const SatFormula& f, std::uint64_t assignment) {
    validate(f);
    if (assignment >> f.num_vars) {
        throw ValidationError("assignment has bits beyond variable " +
                              std::to_string(f.num_vars - 1));
    }
    int count = 0;
    for (const auto& clause : f.clauses) {
        const ClauseMasks m = clause_masks(clause);
        if ((assignment & m.vars) == m.pattern) ++count;
    }
    return count;
}

std::uint64_t count_solutions(const SatFormula& f, std::uint64_t stop_above) {
    validate(f);
    // Variable value words across a block of 64 consecutive assignments:
    // variables 0..5 vary inside the block with fixed bit patterns, the rest
    // are constant per block.
    static constexpr std::uint64_t kLowPattern[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
        0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
    };
    std::vector<ClauseMasks> masks;
    masks.reserve(f.clauses.size());
    for (const auto& clause : f.clauses) masks.push_back(clause_masks(clause));

    const int low_bits = std::min(f.num_vars, 6);
    const std::uint64_t low_mask =
        low_bits == 6 ? ~std::uint64_t{0}
                      : (std::uint64_t{1} << (std::uint64_t{1} << low_bits)) - 1;
    const std::uint64_t blocks =
        f.num_vars > 6 ? (std::uint64_t{1} << (f.num_vars - 6)) : std::uint64_t{1};

    std::uint64_t count = 0;
    for (std::uint64_t hi = 0; hi < blocks; ++hi) {
        std::uint64_t violated_any = 0;
        for (std::size_t ci = 0; ci < masks.size(); ++ci) {
            std::uint64_t violated = ~std::uint64_t{0};
            const auto& clause = f.clauses[ci];
            for (const SatLiteral& lit : clause) {
                std::uint64_t value;
                if (lit.var < 6) {
                    value = kLowPattern[lit.var];
                } else {
                    value = (hi >> (lit.var - 6)) & 1 ? ~std::uint64_t{0} : 0;
                }
                violated &= lit.negated ? value : ~value;
            }
            violated_any |= violated;
            if (violated_any == ~std::uint64_t{0}) break;
        }
        count += static_cast<std::uint64_t>(std::popcount(~violated_any & low_mask));
        if (count > stop_above) return count;
    }
    return count;
}

PauliSumHamiltonian sat_to_hamiltonian(const SatFormula& f) {
    validate(f);
    std::vector<PauliTerm> terms;
    terms.reserve(f.clauses.size() * 8);
    for (const auto& clause : f.clauses) {
        // The violating-assignment projector prod (I + s_i Z_i)/2 with
        // s_i = +1 for a positive literal, -1 for a negated one.
        std::array<SatLiteral, 3> sorted = clause;
        std::sort(sorted.begin(), sorted.end(),
                  [](const SatLiteral& a, const SatLiteral& b) { return a.var < b.var; });
        for (int subset = 0; subset < 8; ++subset) {
            PauliTerm term;
            term.coefficient = 0.125;
            for (int i = 0; i < 3; ++i) {
                if (!(subset >> i & 1)) continue;
                term.ops.push_back({sorted[i].var, Pauli::Z});
                if (sorted[i].negated) term.coefficient = -term.coefficient;
            }
            terms.push_back(std::move(term));
        }
    }

    const std::uint64_t dim = std::uint64_t{1} << f.num_vars;
    std::vector<ClauseMasks> masks;
    masks.reserve(f.clauses.size());
    for (const auto& clause : f.clauses) masks.push_back(clause_masks(clause));
    std::vector<double> diagonal(dim, 0.0);
    for (std::uint64_t k = 0; k < dim; ++k) {
        int n = 0;
        for (const ClauseMasks& m : masks) {
            if ((k & m.vars) == m.pattern) ++n;
        }
        diagonal[k] = n;
    }
    return PauliSumHamiltonian(f.num_vars, std::move(terms), std::move(diagonal));
}

SatFormula generate_unique_3sat(int num_vars, int num_clauses, std::uint64_t seed,
                                int max_attempts) {
    if (num_vars < 3 || num_vars > 20) {
        throw ValidationError("generator variable count " + std::to_string(num_vars) +
                              " outside [3, 20]");
    }
    if (num_clauses < 1) throw ValidationError("generator needs at least one clause");

    Rng rng(seed);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        SatFormula f;
        f.num_vars = num_vars;
        f.clauses.reserve(static_cast<std::size_t>(num_clauses));
        for (int c = 0; c < num_clauses; ++c) {
            int v[3];
            v[0] = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_vars)));
            do {
                v[1] = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_vars)));
            } while (v[1] == v[0]);
            do {
                v[2] = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_vars)));
            } while (v[2] == v[0] || v[2] == v[1]);
            std::array<SatLiteral, 3> clause;
            for (int i = 0; i < 3; ++i) clause[i] = {v[i], rng.below(2) == 1};
            f.clauses.push_back(clause);
        }
        if (count_solutions(f, 1) == 1) return f;
    }
    throw BudgetError("no formula with a unique solution in " + std::to_string(max_attempts) +
                      " attempts for " + std::to_string(num_vars) + " vars and " +
                      std::to_string(num_clauses) +
                      " clauses; try more clauses per variable");
}

}  // namespace qspect
