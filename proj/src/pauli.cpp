#include "qspect/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "qspect/errors.hpp"

namespace qspect {

namespace {

bool ops_less(const std::vector<PauliOp>& a, const std::vector<PauliOp>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].qubit != b[i].qubit) return a[i].qubit < b[i].qubit;
        if (a[i].p != b[i].p) return static_cast<int>(a[i].p) < static_cast<int>(b[i].p);
    }
    return a.size() < b.size();
}

bool ops_equal(const std::vector<PauliOp>& a, const std::vector<PauliOp>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].qubit != b[i].qubit || a[i].p != b[i].p) return false;
    }
    return true;
}

}  // namespace

PauliSumHamiltonian::PauliSumHamiltonian(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits), terms_(std::move(terms)) {
    if (num_qubits < 1 || num_qubits > StateVector::kMaxQubits) {
        throw ValidationError("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                              std::to_string(StateVector::kMaxQubits) + "]");
    }
    for (PauliTerm& t : terms_) {
        for (std::size_t i = 1; i < t.ops.size(); ++i) {
            if (t.ops[i - 1].qubit >= t.ops[i].qubit) {
                throw ValidationError("pauli term qubit indices must be strictly increasing");
            }
        }
        const PauliMasks m = pauli_masks(t.ops, num_qubits_);
        t.flip = m.flip;
        t.phase = m.phase;
        t.y_count = m.y_count;
        if (!std::isfinite(t.coefficient)) {
            throw ValidationError("pauli term coefficient must be finite");
        }
    }
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const PauliTerm& a, const PauliTerm& b) { return ops_less(a.ops, b.ops); });
    std::vector<PauliTerm> merged;
    for (PauliTerm& t : terms_) {
        if (!merged.empty() && ops_equal(merged.back().ops, t.ops)) {
            merged.back().coefficient += t.coefficient;
        } else {
            merged.push_back(std::move(t));
        }
    }
    terms_ = std::move(merged);
}

PauliSumHamiltonian::PauliSumHamiltonian(int num_qubits, std::vector<PauliTerm> terms,
                                         std::vector<double> diagonal)
    : PauliSumHamiltonian(num_qubits, std::move(terms)) {
    if (diagonal.size() != (std::uint64_t{1} << num_qubits_)) {
        throw ValidationError("diagonal length does not match qubit count");
    }
    for (const PauliTerm& t : terms_) {
        if (t.flip != 0) {
            throw ValidationError("diagonal fast path requires Z-only terms");
        }
    }
    diagonal_ = std::move(diagonal);
}

double PauliSumHamiltonian::expectation(const StateVector& state) const {
    if (state.num_qubits() != num_qubits_) {
        throw ValidationError("state has " + std::to_string(state.num_qubits()) +
                              " qubits, hamiltonian has " + std::to_string(num_qubits_));
    }
    if (has_diagonal()) {
        return kernels::diag_expectation(state.amps(), diagonal_);
    }
    cplx acc{};
    for (const PauliTerm& t : terms_) {
        acc += kernels::pauli_expectation(state.amps(), t.flip, t.phase,
                                          t.coefficient * i_power(t.y_count));
    }
    if (std::abs(acc.imag()) >= 1e-10) {
        throw NumericError("expectation value has non-negligible imaginary part " +
                           std::to_string(acc.imag()));
    }
    return acc.real();
}

void PauliSumHamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != (std::uint64_t{1} << num_qubits_) || out.size() != in.size()) {
        throw ValidationError("amplitude buffer length does not match hamiltonian qubit count");
    }
    if (has_diagonal()) {
        kernels::diag_apply(in, out, diagonal_);
        return;
    }
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    for (const PauliTerm& t : terms_) {
        kernels::pauli_accumulate(in, out, t.flip, t.phase, t.coefficient * i_power(t.y_count));
    }
}

std::vector<cplx> PauliSumHamiltonian::apply(const StateVector& state) const {
    if (state.num_qubits() != num_qubits_) {
        throw ValidationError("state has " + std::to_string(state.num_qubits()) +
                              " qubits, hamiltonian has " + std::to_string(num_qubits_));
    }
    std::vector<cplx> out(state.dim());
    apply(state.amps(), out);
    return out;
}

namespace {

double parse_coefficient(const std::string& token, int line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + token.size() || token.empty()) {
        throw ParseError("malformed coefficient '" + token + "'", line);
    }
    if (!std::isfinite(value)) {
        throw ParseError("coefficient '" + token + "' is not finite", line);
    }
    return value;
}

}  // namespace

PauliSumHamiltonian parse_pauli_sum(const std::string& text) {
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    int num_qubits = -1;
    std::vector<PauliTerm> terms;

    while (std::getline(stream, raw)) {
        ++line_no;
        std::istringstream line(raw);
        std::string tok;
        if (!(line >> tok) || tok[0] == '#') continue;

        if (num_qubits < 0) {
            if (tok != "qubits") {
                throw ParseError("expected 'qubits <n>' header, got '" + tok + "'", line_no);
            }
            std::string count;
            if (!(line >> count)) throw ParseError("missing qubit count", line_no);
            char* end = nullptr;
            const long n = std::strtol(count.c_str(), &end, 10);
            if (end != count.c_str() + count.size() || n < 1 || n > StateVector::kMaxQubits) {
                throw ParseError("invalid qubit count '" + count + "'", line_no);
            }
            std::string extra;
            if (line >> extra) throw ParseError("unexpected token '" + extra + "'", line_no);
            num_qubits = static_cast<int>(n);
            continue;
        }

        PauliTerm term;
        term.coefficient = parse_coefficient(tok, line_no);
        int prev_qubit = -1;
        while (line >> tok) {
            if (tok.size() < 2) throw ParseError("malformed pauli operator '" + tok + "'", line_no);
            Pauli p;
            switch (tok[0]) {
                case 'X': p = Pauli::X; break;
                case 'Y': p = Pauli::Y; break;
                case 'Z': p = Pauli::Z; break;
                default:
                    throw ParseError("unknown pauli letter '" + std::string(1, tok[0]) + "'",
                                     line_no);
            }
            char* end = nullptr;
            const long q = std::strtol(tok.c_str() + 1, &end, 10);
            if (end != tok.c_str() + tok.size() || q < 0) {
                throw ParseError("malformed qubit index in '" + tok + "'", line_no);
            }
            if (q >= num_qubits) {
                throw ParseError("qubit index " + std::to_string(q) + " exceeds declared count " +
                                 std::to_string(num_qubits),
                                 line_no);
            }
            if (static_cast<int>(q) == prev_qubit) {
                throw ParseError("duplicate qubit " + std::to_string(q) + " in term", line_no);
            }
            if (static_cast<int>(q) < prev_qubit) {
                throw ParseError("qubit indices must be strictly increasing", line_no);
            }
            prev_qubit = static_cast<int>(q);
            term.ops.push_back({static_cast<int>(q), p});
        }
        terms.push_back(std::move(term));
    }

    if (num_qubits < 0) throw ParseError("missing 'qubits <n>' header", line_no + 1);
    return PauliSumHamiltonian(num_qubits, std::move(terms));
}

std::string serialize(const PauliSumHamiltonian& h) {
    std::string out = "qubits " + std::to_string(h.num_qubits()) + "\n";
    char buf[64];
    for (const PauliTerm& t : h.terms()) {
        std::snprintf(buf, sizeof(buf), "%.17g", t.coefficient);
        out += buf;
        for (const PauliOp& op : t.ops) {
            out += ' ';
            out += (op.p == Pauli::X ? 'X' : op.p == Pauli::Y ? 'Y' : 'Z');
            out += std::to_string(op.qubit);
        }
        out += '\n';
    }
    return out;
}

ComplexMatrix materialize_dense(const PauliSumHamiltonian& h) {
    if (h.num_qubits() > 12) {
        throw CapacityError("dense materialization limited to 12 qubits, got " +
                            std::to_string(h.num_qubits()));
    }
    const std::uint64_t dim = std::uint64_t{1} << h.num_qubits();
    ComplexMatrix m(static_cast<int>(dim), static_cast<int>(dim));
    for (const PauliTerm& t : h.terms()) {
        const cplx w = t.coefficient * i_power(t.y_count);
        for (std::uint64_t s = 0; s < dim; ++s) {
            const bool neg = std::popcount(s & t.phase) & 1;
            m(static_cast<int>(s ^ t.flip), static_cast<int>(s)) += neg ? -w : w;
        }
    }
    if (hermiticity_defect(m) >= 1e-12) {
        throw NumericError("materialized hamiltonian is not Hermitian");
    }
    return m;
}

ComplexMatrix deflate_dense(const ComplexMatrix& hd, std::span<const StateVector> states,
                            std::span<const double> alphas) {
    if (states.size() != alphas.size()) {
        throw ValidationError("deflation state and weight counts differ");
    }
    ComplexMatrix m = hd;
    for (std::size_t j = 0; j < states.size(); ++j) {
        const std::span<const cplx> v = states[j].amps();
        if (static_cast<int>(v.size()) != m.rows) {
            throw ValidationError("deflation state dimension does not match matrix");
        }
        const double a = alphas[j];
        for (int r = 0; r < m.rows; ++r) {
            for (int c = 0; c < m.cols; ++c) {
                m(r, c) += a * v[static_cast<std::size_t>(r)] * std::conj(v[static_cast<std::size_t>(c)]);
            }
        }
    }
    return m;
}

std::vector<double> exact_eigenvalues(const PauliSumHamiltonian& h) {
    if (h.has_diagonal()) {
        std::vector<double> evals(h.diagonal().begin(), h.diagonal().end());
        std::sort(evals.begin(), evals.end());
        return evals;
    }
    return eigh(materialize_dense(h)).eigenvalues;
}

}  // namespace qspect
