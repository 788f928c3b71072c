#include "qspect/ansatz.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "qspect/errors.hpp"

namespace qspect {

void validate(const Ansatz& ansatz) {
    if (ansatz.num_qubits < 1 || ansatz.num_qubits > StateVector::kMaxQubits) {
        throw ValidationError("ansatz qubit count " + std::to_string(ansatz.num_qubits) +
                              " outside [1, " + std::to_string(StateVector::kMaxQubits) + "]");
    }
    if (ansatz.num_params < 0) throw ValidationError("negative parameter count");
    for (const Gate& g : ansatz.gates) {
        validate_gate(g, ansatz.num_qubits);
        if (g.parameter_index >= ansatz.num_params) {
            throw ValidationError("gate parameter index " + std::to_string(g.parameter_index) +
                                  " exceeds declared count " +
                                  std::to_string(ansatz.num_params));
        }
    }
}

Ansatz build_compact(int num_qubits, int params_per_qubit) {
    if (num_qubits < 2) {
        throw ValidationError("compact ansatz needs at least 2 qubits, got " +
                              std::to_string(num_qubits));
    }
    if (params_per_qubit < 1) {
        throw ValidationError("params_per_qubit must be at least 1");
    }
    Ansatz a;
    a.num_qubits = num_qubits;
    a.num_params = params_per_qubit * num_qubits;
    a.family = AnsatzFamily::Compact;

    const int rounds = (params_per_qubit + 1) / 2;
    int next = 0;
    for (int r = 0; r < rounds; ++r) {
        if (r > 0) {
            for (int q = 0; q + 1 < num_qubits; ++q) a.gates.push_back(Gate::cz(q, q + 1));
        }
        for (int q = 0; q < num_qubits; ++q) a.gates.push_back(Gate::ry(q, next++));
        const bool drop_rz = (r == rounds - 1) && (params_per_qubit % 2 == 1);
        if (!drop_rz) {
            for (int q = 0; q < num_qubits; ++q) a.gates.push_back(Gate::rz(q, next++));
        }
    }
    return a;
}

Ansatz build_lowdepth(int num_qubits, int target_params) {
    if (num_qubits < 2) {
        throw ValidationError("lowdepth ansatz needs at least 2 qubits, got " +
                              std::to_string(num_qubits));
    }
    if (target_params < 1) {
        throw ConfigError("lowdepth ansatz target of " + std::to_string(target_params) +
                          " parameters is unreachable");
    }
    Ansatz a;
    a.num_qubits = num_qubits;
    a.num_params = target_params;
    a.family = AnsatzFamily::LowDepth;

    int next = 0;
    for (int layer = 0; next < target_params; ++layer) {
        const int start = layer % 2;
        if (start + 1 >= num_qubits) continue;
        for (int q = start; q + 1 < num_qubits && next < target_params; q += 2) {
            const Gate block[] = {
                Gate::cry(q, q + 1, next),
                Gate::crz(q + 1, q, next + 1),
                Gate::ry(q, next + 2),
                Gate::rz(q + 1, next + 3),
            };
            for (const Gate& g : block) {
                if (next == target_params) break;
                a.gates.push_back(g);
                ++next;
            }
        }
    }
    return a;
}

Ansatz build_rotation_chain(int num_params) {
    if (num_params < 1) throw ValidationError("rotation chain needs at least 1 parameter");
    Ansatz a;
    a.num_qubits = 1;
    a.num_params = num_params;
    a.family = AnsatzFamily::Custom;
    for (int p = 0; p < num_params; ++p) {
        a.gates.push_back(p % 2 == 0 ? Gate::ry(0, p) : Gate::rz(0, p));
    }
    return a;
}

namespace {

int parse_indexed_token(const std::string& tok, char prefix, const char* what, int line) {
    if (tok.size() < 2 || tok[0] != prefix) {
        throw ParseError(std::string("expected ") + what + " token like '" + prefix +
                         "0', got '" + tok + "'",
                         line);
    }
    char* end = nullptr;
    const long v = std::strtol(tok.c_str() + 1, &end, 10);
    if (end != tok.c_str() + tok.size() || v < 0) {
        throw ParseError(std::string("malformed ") + what + " token '" + tok + "'", line);
    }
    return static_cast<int>(v);
}

int parse_header_value(std::istringstream& line, const std::string& key, int line_no) {
    std::string value;
    if (!(line >> value)) throw ParseError("missing value after '" + key + "'", line_no);
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size() || v < 1) {
        throw ParseError("invalid " + key + " count '" + value + "'", line_no);
    }
    std::string extra;
    if (line >> extra) throw ParseError("unexpected token '" + extra + "'", line_no);
    return static_cast<int>(v);
}

}  // namespace

Ansatz parse_ansatz(const std::string& text) {
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    int num_qubits = -1;
    int num_params = -1;
    Ansatz a;
    a.family = AnsatzFamily::Custom;

    while (std::getline(stream, raw)) {
        ++line_no;
        std::istringstream line(raw);
        std::string tok;
        if (!(line >> tok) || tok[0] == '#') continue;

        if (tok == "qubits") {
            if (num_qubits >= 0) throw ParseError("duplicate qubits header", line_no);
            num_qubits = parse_header_value(line, "qubits", line_no);
            continue;
        }
        if (tok == "params") {
            if (num_params >= 0) throw ParseError("duplicate params header", line_no);
            num_params = parse_header_value(line, "params", line_no);
            continue;
        }
        if (num_qubits < 0 || num_params < 0) {
            throw ParseError("gate line before qubits/params headers", line_no);
        }

        Gate g;
        int want_qubits = 0;
        bool want_param = false;
        if (tok == "RX" || tok == "RY" || tok == "RZ") {
            g.kind = tok == "RX" ? GateKind::RX : tok == "RY" ? GateKind::RY : GateKind::RZ;
            want_qubits = 1;
            want_param = true;
        } else if (tok == "CRY" || tok == "CRZ") {
            g.kind = tok == "CRY" ? GateKind::CRY : GateKind::CRZ;
            want_qubits = 2;
            want_param = true;
        } else if (tok == "CZ" || tok == "CNOT") {
            g.kind = tok == "CZ" ? GateKind::CZ : GateKind::CNOT;
            want_qubits = 2;
        } else if (tok == "H" || tok == "X") {
            g.kind = tok == "H" ? GateKind::H : GateKind::X;
            want_qubits = 1;
        } else {
            throw ParseError("unknown gate '" + tok + "'", line_no);
        }

        int qubits[2] = {-1, -1};
        for (int i = 0; i < want_qubits; ++i) {
            if (!(line >> tok)) throw ParseError("missing qubit operand", line_no);
            qubits[i] = parse_indexed_token(tok, 'q', "qubit", line_no);
        }
        if (want_qubits == 1) {
            g.target = qubits[0];
        } else {
            g.control = qubits[0];
            g.target = qubits[1];
        }
        if (want_param) {
            if (!(line >> tok)) throw ParseError("missing parameter operand", line_no);
            g.parameter_index = parse_indexed_token(tok, 'p', "parameter", line_no);
            if (g.parameter_index >= num_params) {
                throw ParseError("parameter index " + std::to_string(g.parameter_index) +
                                 " exceeds declared count " + std::to_string(num_params),
                                 line_no);
            }
        }
        std::string extra;
        if (line >> extra) throw ParseError("unexpected token '" + extra + "'", line_no);

        try {
            validate_gate(g, num_qubits);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line_no);
        }
        a.gates.push_back(g);
    }

    if (num_qubits < 0) throw ParseError("missing qubits header", line_no + 1);
    if (num_params < 0) throw ParseError("missing params header", line_no + 1);
    a.num_qubits = num_qubits;
    a.num_params = num_params;

    std::vector<bool> used(static_cast<std::size_t>(num_params), false);
    for (const Gate& g : a.gates) {
        if (g.parameter_index >= 0) used[static_cast<std::size_t>(g.parameter_index)] = true;
    }
    for (int p = 0; p < num_params; ++p) {
        if (!used[static_cast<std::size_t>(p)]) {
            throw ParseError("parameter p" + std::to_string(p) + " is never used", line_no + 1);
        }
    }
    return a;
}

StateVector evaluate(const Ansatz& ansatz, std::span<const double> theta) {
    validate(ansatz);
    if (static_cast<int>(theta.size()) != ansatz.num_params) {
        throw ValidationError("got " + std::to_string(theta.size()) + " parameters, ansatz has " +
                              std::to_string(ansatz.num_params));
    }
    StateVector state(ansatz.num_qubits);
    for (const Gate& g : ansatz.gates) {
        state.apply(g, g.parameter_index >= 0 ? theta[static_cast<std::size_t>(g.parameter_index)]
                                              : 0.0);
    }
    return state;
}

DerivativeVector derivative_fd(const Ansatz& ansatz, std::span<const double> theta, int param,
                               double step) {
    if (param < 0 || param >= ansatz.num_params) {
        throw ValidationError("parameter index " + std::to_string(param) + " out of range");
    }
    if (!(step > 0.0)) throw ValidationError("finite-difference step must be positive");

    const bool used = std::any_of(ansatz.gates.begin(), ansatz.gates.end(),
                                  [&](const Gate& g) { return g.parameter_index == param; });
    if (!used) {
        // The stencil would only amplify rounding noise from four identical states.
        DerivativeVector d;
        d.param_index = param;
        d.components.assign(std::uint64_t{1} << ansatz.num_qubits, cplx{0.0, 0.0});
        return d;
    }

    std::vector<double> shifted(theta.begin(), theta.end());
    const double base = shifted[static_cast<std::size_t>(param)];
    const auto eval_at = [&](double offset) {
        shifted[static_cast<std::size_t>(param)] = base + offset;
        return evaluate(ansatz, shifted);
    };

    const StateVector p2 = eval_at(2.0 * step);
    const StateVector p1 = eval_at(step);
    const StateVector m1 = eval_at(-step);
    const StateVector m2 = eval_at(-2.0 * step);

    DerivativeVector d;
    d.param_index = param;
    d.components.assign(p2.dim(), cplx{0.0, 0.0});
    kernels::axpy(d.components, cplx{-1.0, 0.0}, p2.amps());
    kernels::axpy(d.components, cplx{8.0, 0.0}, p1.amps());
    kernels::axpy(d.components, cplx{-8.0, 0.0}, m1.amps());
    kernels::axpy(d.components, cplx{1.0, 0.0}, m2.amps());
    kernels::scale(d.components, cplx{1.0 / (12.0 * step), 0.0});
    return d;
}

namespace {

// Multiplies by the gate's generator: the rotation Pauli for plain
// rotations, the control-projected Pauli for controlled rotations.
void apply_generator(StateVector& state, const Gate& g) {
    PauliOp op{g.target, Pauli::X};
    switch (g.kind) {
        case GateKind::RX: op.p = Pauli::X; break;
        case GateKind::RY:
        case GateKind::CRY: op.p = Pauli::Y; break;
        case GateKind::RZ:
        case GateKind::CRZ: op.p = Pauli::Z; break;
        default:
            throw ValidationError(std::string(gate_name(g.kind)) +
                                  " has no rotation generator");
    }
    state.apply_pauli_string(std::span<const PauliOp>(&op, 1));
    if (g.kind == GateKind::CRY || g.kind == GateKind::CRZ) {
        kernels::project_one(state.amps(), g.control);
    }
}

}  // namespace

DerivativeVector derivative_analytic(const Ansatz& ansatz, std::span<const double> theta,
                                     int param) {
    validate(ansatz);
    if (param < 0 || param >= ansatz.num_params) {
        throw ValidationError("parameter index " + std::to_string(param) + " out of range");
    }
    if (static_cast<int>(theta.size()) != ansatz.num_params) {
        throw ValidationError("got " + std::to_string(theta.size()) + " parameters, ansatz has " +
                              std::to_string(ansatz.num_params));
    }

    DerivativeVector d;
    d.param_index = param;
    d.components.assign(std::uint64_t{1} << ansatz.num_qubits, cplx{0.0, 0.0});
    for (std::size_t g = 0; g < ansatz.gates.size(); ++g) {
        if (ansatz.gates[g].parameter_index != param) continue;
        StateVector state(ansatz.num_qubits);
        for (std::size_t k = 0; k < ansatz.gates.size(); ++k) {
            if (k == g) apply_generator(state, ansatz.gates[g]);
            const Gate& gate = ansatz.gates[k];
            state.apply(gate, gate.parameter_index >= 0
                                  ? theta[static_cast<std::size_t>(gate.parameter_index)]
                                  : 0.0);
        }
        kernels::axpy(d.components, cplx{0.0, -0.5}, state.amps());
    }
    return d;
}

}  // namespace qspect
