#include "qspect/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qspect/ansatz.hpp"
#include "qspect/evolution.hpp"
#include "qspect/linalg.hpp"
#include "qspect/pauli.hpp"
#include "qspect/rng.hpp"
#include "qspect/state_vector.hpp"
#include "qspect/swap_test.hpp"

namespace qspect {

namespace {

std::string fmt_e(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", x);
    return buf;
}

StateVector random_state(int num_qubits, Rng& rng) {
    std::vector<cplx> amps(std::uint64_t{1} << num_qubits);
    for (auto& a : amps) a = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    StateVector s(num_qubits, std::move(amps));
    s.normalize();
    return s;
}

PauliSumHamiltonian random_pauli_sum(int num_qubits, int num_terms, Rng& rng) {
    std::vector<PauliTerm> terms;
    terms.reserve(num_terms);
    for (int t = 0; t < num_terms; ++t) {
        PauliTerm term;
        term.coefficient = rng.uniform(-1.0, 1.0);
        while (term.ops.empty()) {
            for (int q = 0; q < num_qubits; ++q) {
                const auto r = rng.below(4);
                if (r == 3) continue;
                term.ops.push_back({q, static_cast<Pauli>(r)});
            }
        }
        terms.push_back(std::move(term));
    }
    return PauliSumHamiltonian(num_qubits, std::move(terms));
}

std::vector<double> random_theta(int n, Rng& rng) {
    std::vector<double> theta(n);
    for (auto& t : theta) t = rng.angle();
    return theta;
}

struct Checker {
    std::ostream& out;
    int failures = 0;

    void report(const std::string& name, bool ok, const std::string& detail) {
        if (ok) {
            out << "ok " << name << " (" << detail << ")\n";
        } else {
            out << "FAIL " << name << ": " << detail << "\n";
            ++failures;
        }
    }
};

void check_shallow_swap(Checker& c, Rng& rng) {
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const int l = 1 + static_cast<int>(rng.below(4));
        const StateVector psi = random_state(l, rng);
        const StateVector phi = trial % 4 == 0 ? psi : random_state(l, rng);
        const double direct = std::norm(inner_product(psi, phi));
        const auto outcome = shallow_swap_overlap(psi, phi);
        worst = std::max(worst, std::abs(outcome.overlap_estimate - direct));
    }
    c.report("shallow-swap-identity", worst < 1e-12, "40 pairs, max dev " + fmt_e(worst));
}

void check_conventional_swap(Checker& c, Rng& rng) {
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const int l = 1 + static_cast<int>(rng.below(4));
        const StateVector psi = random_state(l, rng);
        const StateVector phi = trial % 4 == 0 ? psi : random_state(l, rng);
        const double ov2 = std::norm(inner_product(psi, phi));
        const auto result = conventional_swap(psi, phi);
        worst = std::max(worst, std::abs(result.p_ancilla_0 - 0.5 * (1.0 + ov2)));
        worst = std::max(worst, std::abs(result.registers_plus.norm() - 1.0));
        if (result.registers_minus) {
            worst = std::max(worst, std::abs(result.registers_minus->norm() - 1.0));
        }
    }
    c.report("conventional-swap-identity", worst < 1e-12, "40 pairs, max dev " + fmt_e(worst));
}

void check_hadamard_test(Checker& c, Rng& rng) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Ansatz v = trial % 2 == 0 ? build_compact(3, 4) : build_lowdepth(3, 10);
        const auto theta = random_theta(v.num_params, rng);
        const double phase = rng.angle();
        const cplx amp0 = inner_product(StateVector(3), evaluate(v, theta));
        const double expected = (std::exp(cplx(0.0, phase)) * amp0).real();
        worst = std::max(worst, std::abs(hadamard_test(v, theta, phase) - expected));
    }
    c.report("hadamard-test-identity", worst < 1e-12, "20 circuits, max dev " + fmt_e(worst));
}

void check_derivatives(Checker& c, Rng& rng) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Ansatz ansatz;
        switch (trial % 3) {
            case 0: ansatz = build_compact(3, 4); break;
            case 1: ansatz = build_lowdepth(4, 16); break;
            default: ansatz = build_rotation_chain(5); break;
        }
        const auto theta = random_theta(ansatz.num_params, rng);
        const int param = static_cast<int>(rng.below(ansatz.num_params));
        const auto fd = derivative_fd(ansatz, theta, param);
        const auto an = derivative_analytic(ansatz, theta, param);
        for (std::size_t k = 0; k < fd.components.size(); ++k) {
            worst = std::max(worst, std::abs(fd.components[k] - an.components[k]));
        }
    }
    c.report("fd-vs-analytic-derivatives", worst < 1e-7, "20 circuits, max dev " + fmt_e(worst));
}

void check_tikhonov(Checker& c, Rng& rng) {
    const double lambdas[] = {1e-4, 1e-3, 1e-2};
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(11));
        RealMatrix m(n, n);
        std::vector<double> v(n);
        for (auto& x : m.a) x = rng.uniform(-1.0, 1.0);
        for (auto& x : v) x = rng.uniform(-1.0, 1.0);
        const double lambda = lambdas[trial % 3];
        const auto x = tikhonov_solve(m, v, lambda);

        // Residual of the normal equations (M^T M + lambda I) x = M^T v.
        std::vector<double> rhs(n, 0.0), lhs(n, 0.0), mx(n, 0.0);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) mx[r] += m(r, k) * x[k];
        for (int k = 0; k < n; ++k) {
            for (int r = 0; r < n; ++r) {
                rhs[k] += m(r, k) * v[r];
                lhs[k] += m(r, k) * mx[r];
            }
            lhs[k] += lambda * x[k];
        }
        double res = 0.0, scale = 0.0;
        for (int k = 0; k < n; ++k) {
            res += (lhs[k] - rhs[k]) * (lhs[k] - rhs[k]);
            scale += rhs[k] * rhs[k];
        }
        worst = std::max(worst, std::sqrt(res) / std::max(1.0, std::sqrt(scale)));
    }
    c.report("tikhonov-normal-equations", worst < 1e-9, "30 systems, max rel res " + fmt_e(worst));
}

void check_deflation_shift(Checker& c, Rng& rng) {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto h = random_pauli_sum(3, 6, rng);
        const auto hd = materialize_dense(h);
        const auto es = eigh(hd);
        const int dim = hd.rows;
        const int k = static_cast<int>(rng.below(dim));
        std::vector<cplx> column(dim);
        for (int r = 0; r < dim; ++r) column[r] = es.eigenvectors(r, k);
        const StateVector target(3, std::move(column));
        const double alpha = rng.uniform(0.5, 3.0);

        const StateVector states[] = {target};
        const double alphas[] = {alpha};
        const auto shifted = eigh(deflate_dense(hd, states, alphas));

        auto expected = es.eigenvalues;
        expected[k] += alpha;
        std::sort(expected.begin(), expected.end());
        for (int i = 0; i < dim; ++i) {
            worst = std::max(worst, std::abs(shifted.eigenvalues[i] - expected[i]));
        }
    }
    c.report("deflation-spectrum-shift", worst < 1e-9, "5 matrices, max dev " + fmt_e(worst));
}

void check_pauli_algebra(Checker& c, Rng& rng) {
    double worst = 0.0;
    bool round_trips = true;
    for (int trial = 0; trial < 10; ++trial) {
        const int nq = 3 + static_cast<int>(rng.below(2));
        const auto h = random_pauli_sum(nq, 5, rng);
        const auto hd = materialize_dense(h);
        worst = std::max(worst, hermiticity_defect(hd));

        const StateVector psi = random_state(nq, rng);
        const auto hpsi = h.apply(psi);
        cplx quad = 0.0;
        for (std::size_t s = 0; s < hpsi.size(); ++s) quad += std::conj(psi[s]) * hpsi[s];
        worst = std::max(worst, std::abs(quad.real() - h.expectation(psi)));

        const auto dense_hpsi = matvec(hd, psi.amps());
        for (std::size_t s = 0; s < hpsi.size(); ++s) {
            worst = std::max(worst, std::abs(hpsi[s] - dense_hpsi[s]));
        }

        const std::string text = serialize(h);
        if (serialize(parse_pauli_sum(text)) != text) round_trips = false;
    }
    c.report("pauli-sum-algebra", worst < 1e-10 && round_trips,
             round_trips ? "10 operators, max dev " + fmt_e(worst) : "serialize round trip broke");
}

void check_monotonicity(Checker& c, const VerifyOptions& options) {
    std::vector<PauliTerm> terms;
    for (int q = 0; q < 3; ++q) {
        terms.push_back({1.0, {{q, Pauli::Z}, {q + 1, Pauli::Z}}, 0, 0, 0});
    }
    for (int q = 0; q < 4; ++q) {
        terms.push_back({0.5, {{q, Pauli::X}}, 0, 0, 0});
    }
    PauliSumHamiltonian h(4, std::move(terms));

    EngineConfig config;
    config.deriv = DerivMode::Analytic;
    config.seed = options.seed;
    config.flip_v_sign = options.flip_v_sign;
    SpectrumEngine engine(build_compact(4, 4), std::move(h), config);

    const int steps = 150;
    int small_rises = 0;
    double prev = engine.effective_energy();
    for (int i = 0; i < steps; ++i) {
        engine.step();
        const double next = engine.effective_energy();
        const double rise = next - prev;
        if (rise > 1e-4) {
            c.report("imaginary-time-monotonicity", false,
                     "step " + std::to_string(i + 1) + " raised the energy by " + fmt_e(rise));
            return;
        }
        if (rise > 1e-6) ++small_rises;
        prev = next;
    }
    const bool ok = small_rises <= steps / 100;
    c.report("imaginary-time-monotonicity", ok,
             ok ? std::to_string(steps) + " steps, " + std::to_string(small_rises) +
                      " sub-1e-4 rises"
                : std::to_string(small_rises) + " of " + std::to_string(steps) +
                      " steps rose above 1e-6");
}

}  // namespace

int run_verification(const VerifyOptions& options, std::ostream& out) {
    Rng rng(options.seed);
    Checker c{out};
    check_shallow_swap(c, rng);
    check_conventional_swap(c, rng);
    check_hadamard_test(c, rng);
    check_derivatives(c, rng);
    check_tikhonov(c, rng);
    check_deflation_shift(c, rng);
    check_pauli_algebra(c, rng);
    check_monotonicity(c, options);
    out << (c.failures == 0 ? "all properties ok\n"
                            : std::to_string(c.failures) + " properties failed\n");
    return c.failures;
}

}  // namespace qspect
