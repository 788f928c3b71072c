#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qspect/errors.hpp"
#include "qspect/pauli.hpp"
#include "qspect/rng.hpp"
#include "qspect/sat.hpp"
#include "qspect/state_vector.hpp"
#include "support/oracles.hpp"

using namespace qspect;

TEST_CASE("pauli sum parsing") {
    const auto h = parse_pauli_sum("qubits 2\n0.5 Z0\n-0.25 X0 X1\n");
    CHECK(h.num_qubits() == 2);
    REQUIRE(h.terms().size() == 2);
    // Canonical order sorts by op list; X0 X1 precedes Z0.
    CHECK(h.terms()[0].coefficient == -0.25);
    CHECK(h.terms()[0].ops.size() == 2);
    CHECK(h.terms()[1].coefficient == 0.5);
    CHECK(h.terms()[1].ops.size() == 1);
    CHECK(h.terms()[1].ops[0].qubit == 0);
    CHECK(h.terms()[1].ops[0].p == Pauli::Z);

    const auto identity = parse_pauli_sum("qubits 1\n1.0\n");
    REQUIRE(identity.terms().size() == 1);
    CHECK(identity.terms()[0].ops.empty());
    Rng rng(3);
    CHECK(identity.expectation(oracles::random_state(1, rng)) == doctest::Approx(1.0));

    const auto merged = parse_pauli_sum("qubits 1\n0.5 Z0\n0.5 Z0\n");
    REQUIRE(merged.terms().size() == 1);
    CHECK(merged.terms()[0].coefficient == 1.0);

    const auto commented = parse_pauli_sum("# title\nqubits 1\n\n-2 X0\n");
    CHECK(commented.terms().size() == 1);
}

TEST_CASE("pauli sum parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_pauli_sum("qubits 1\nnope Z0\n"), ParseError);
    CHECK_THROWS_AS(parse_pauli_sum("qubits 1\n1.0 W0\n"), ParseError);
    CHECK_THROWS_AS(parse_pauli_sum("qubits 2\n1.0 Z0 Z0\n"), ParseError);
    CHECK_THROWS_AS(parse_pauli_sum("qubits 2\n1.0 Z1 Z0\n"), ParseError);
    CHECK_THROWS_AS(parse_pauli_sum("qubits 1\n1.0 Z4\n"), ParseError);
    CHECK_THROWS_AS(parse_pauli_sum("1.0 Z0\n"), ParseError);
    try {
        parse_pauli_sum("qubits 1\n1.0 Z0\nbroken\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("serialize round trip") {
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = oracles::random_pauli_sum(4, 6, rng);
        const std::string text = serialize(h);
        const auto back = parse_pauli_sum(text);
        CHECK(serialize(back) == text);
        REQUIRE(back.terms().size() == h.terms().size());
        for (std::size_t t = 0; t < h.terms().size(); ++t) {
            CHECK(back.terms()[t].coefficient == h.terms()[t].coefficient);
        }
    }
}

TEST_CASE("expectation basics") {
    const auto z0 = parse_pauli_sum("qubits 1\n1 Z0\n");
    const auto halfx = parse_pauli_sum("qubits 1\n0.5 X0\n");
    const auto x0 = parse_pauli_sum("qubits 1\n1 X0\n");

    const StateVector zero(1);
    StateVector plus(1);
    plus.apply(Gate::h(0));

    CHECK(z0.expectation(zero) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(halfx.expectation(zero) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(x0.expectation(plus) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("expectation and apply match the Kronecker oracle") {
    Rng rng(5);
    for (int trial = 0; trial < 12; ++trial) {
        const int nq = 2 + static_cast<int>(rng.below(4));
        const auto h = oracles::random_pauli_sum(nq, 5, rng);
        const auto dense = oracles::kron_dense(h);
        const StateVector psi = oracles::random_state(nq, rng);

        const auto hpsi = h.apply(psi);
        const auto oracle_hpsi = matvec(dense, psi.amps());
        double worst = 0.0;
        for (std::size_t k = 0; k < hpsi.size(); ++k) {
            worst = std::max(worst, std::abs(hpsi[k] - oracle_hpsi[k]));
        }
        CHECK(worst < 1e-12);

        cplx quad = 0.0;
        for (std::size_t k = 0; k < hpsi.size(); ++k) quad += std::conj(psi[k]) * oracle_hpsi[k];
        CHECK(h.expectation(psi) == doctest::Approx(quad.real()).epsilon(1e-10));
    }
}

TEST_CASE("materialize_dense") {
    const auto z0 = parse_pauli_sum("qubits 1\n1 Z0\n");
    const auto zd = materialize_dense(z0);
    CHECK(zd(0, 0) == cplx(1.0, 0.0));
    CHECK(zd(1, 1) == cplx(-1.0, 0.0));
    CHECK(zd(0, 1) == cplx(0.0, 0.0));

    const auto x0 = parse_pauli_sum("qubits 1\n1 X0\n");
    const auto xd = materialize_dense(x0);
    CHECK(xd(0, 1) == cplx(1.0, 0.0));
    CHECK(xd(1, 0) == cplx(1.0, 0.0));
    CHECK(xd(0, 0) == cplx(0.0, 0.0));

    Rng rng(6);
    for (int trial = 0; trial < 8; ++trial) {
        const auto h = oracles::random_pauli_sum(3, 6, rng);
        const auto dense = materialize_dense(h);
        const auto oracle = oracles::kron_dense(h);
        double worst = 0.0;
        for (std::size_t k = 0; k < dense.a.size(); ++k) {
            worst = std::max(worst, std::abs(dense.a[k] - oracle.a[k]));
        }
        CHECK(worst < 1e-13);
        CHECK(hermiticity_defect(dense) == 0.0);
    }

    std::vector<PauliTerm> big;
    big.push_back({1.0, {{12, Pauli::Z}}, 0, 0, 0});
    CHECK_THROWS_AS(materialize_dense(PauliSumHamiltonian(13, std::move(big))), CapacityError);
}

TEST_CASE("deflate_dense examples") {
    const auto z0 = parse_pauli_sum("qubits 1\n1 Z0\n");
    const auto zd = materialize_dense(z0);

    const std::vector<StateVector> one = {StateVector(1, {0.0, 1.0})};
    const std::vector<double> ten = {10.0};
    const auto shifted = eigh(deflate_dense(zd, one, ten));
    REQUIRE(shifted.eigenvalues.size() == 2);
    CHECK(shifted.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shifted.eigenvalues[1] == doctest::Approx(9.0).epsilon(1e-12));

    const std::vector<double> nothing = {0.0};
    const auto unchanged = deflate_dense(zd, one, nothing);
    for (std::size_t k = 0; k < zd.a.size(); ++k) CHECK(unchanged.a[k] == zd.a[k]);

    CHECK_THROWS_AS(deflate_dense(zd, std::vector<StateVector>{StateVector(2)}, ten),
                    ValidationError);
}

TEST_CASE("deflating the exact ground state shifts only its eigenvalue") {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const auto h = oracles::random_pauli_sum(3, 6, rng);
        const auto hd = materialize_dense(h);
        const auto es = eigh(hd);
        std::vector<cplx> ground(static_cast<std::size_t>(hd.rows));
        for (int r = 0; r < hd.rows; ++r) ground[static_cast<std::size_t>(r)] = es.eigenvectors(r, 0);

        const std::vector<StateVector> gs = {StateVector(3, std::move(ground))};
        const std::vector<double> alpha = {10.0};
        const auto after = eigh(deflate_dense(hd, gs, alpha));

        std::vector<double> expected = es.eigenvalues;
        expected[0] += 10.0;
        std::sort(expected.begin(), expected.end());
        for (std::size_t k = 0; k < expected.size(); ++k) {
            CHECK(std::abs(after.eigenvalues[k] - expected[k]) < 1e-10);
        }
    }
}

TEST_CASE("cnf parsing") {
    const auto f = parse_cnf("p cnf 3 1\n1 2 3 0\n");
    CHECK(f.num_vars == 3);
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0][0].var == 0);
    CHECK_FALSE(f.clauses[0][0].negated);

    const auto g = parse_cnf("c comment\np cnf 3 1\n-1 2 3 0\n");
    CHECK(g.clauses[0][0].var == 0);
    CHECK(g.clauses[0][0].negated);

    CHECK_THROWS_AS(parse_cnf("p cnf 3 1\n1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_cnf("p cnf 3 2\n1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_cnf("p cnf 3 1\n1 2 4 0\n"), ParseError);
    CHECK_THROWS_AS(parse_cnf("p cnf 3 1\n1 1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_cnf("1 2 3 0\n"), ParseError);
}

TEST_CASE("violated clause counting") {
    const auto f = parse_cnf("p cnf 3 1\n1 2 3 0\n");
    CHECK(violated_clauses(f, 0b000) == 1);
    CHECK(violated_clauses(f, 0b001) == 0);

    const auto g = parse_cnf("p cnf 3 1\n-1 2 3 0\n");
    CHECK(violated_clauses(g, 0b111) == 0);
    CHECK(violated_clauses(g, 0b001) == 1);
}

TEST_CASE("solution counting matches brute force") {
    Rng rng(8);
    for (const int nv : {3, 5, 7, 8}) {
        for (int trial = 0; trial < 4; ++trial) {
            SatFormula f;
            f.num_vars = nv;
            const int nc = 2 + static_cast<int>(rng.below(6));
            for (int c = 0; c < nc; ++c) {
                std::array<SatLiteral, 3> clause{};
                int v0 = static_cast<int>(rng.below(nv));
                int v1 = v0, v2 = v0;
                while (v1 == v0) v1 = static_cast<int>(rng.below(nv));
                while (v2 == v0 || v2 == v1) v2 = static_cast<int>(rng.below(nv));
                clause[0] = {v0, rng.below(2) == 0};
                clause[1] = {v1, rng.below(2) == 0};
                clause[2] = {v2, rng.below(2) == 0};
                f.clauses.push_back(clause);
            }
            std::uint64_t brute = 0;
            for (std::uint64_t a = 0; a < (std::uint64_t{1} << nv); ++a) {
                if (violated_clauses(f, a) == 0) ++brute;
            }
            CHECK(count_solutions(f) == brute);
        }
    }
}

TEST_CASE("sat hamiltonian compilation") {
    const auto single = sat_to_hamiltonian(parse_cnf("p cnf 3 1\n1 2 3 0\n"));
    REQUIRE(single.has_diagonal());
    const auto diag = single.diagonal();
    CHECK(diag[0] == 1.0);
    for (std::size_t k = 1; k < diag.size(); ++k) CHECK(diag[k] == 0.0);

    SatFormula empty;
    empty.num_vars = 2;
    const auto zero = sat_to_hamiltonian(empty);
    for (const double d : zero.diagonal()) CHECK(d == 0.0);
    CHECK(zero.terms().empty());

    Rng rng(9);
    SatFormula f;
    f.num_vars = 4;
    for (int c = 0; c < 16; ++c) {
        std::array<SatLiteral, 3> clause{};
        int v0 = static_cast<int>(rng.below(4));
        int v1 = v0, v2 = v0;
        while (v1 == v0) v1 = static_cast<int>(rng.below(4));
        while (v2 == v0 || v2 == v1) v2 = static_cast<int>(rng.below(4));
        clause[0] = {v0, rng.below(2) == 0};
        clause[1] = {v1, rng.below(2) == 0};
        clause[2] = {v2, rng.below(2) == 0};
        f.clauses.push_back(clause);
    }
    const auto h = sat_to_hamiltonian(f);
    for (std::uint64_t a = 0; a < 16; ++a) {
        CHECK(h.diagonal()[a] == static_cast<double>(violated_clauses(f, a)));
    }

    // The Pauli-Z expansion reproduces the diagonal exactly.
    const auto dense = materialize_dense(PauliSumHamiltonian(4, h.terms()));
    for (int r = 0; r < dense.rows; ++r) {
        CHECK(std::abs(dense(r, r).real() - h.diagonal()[static_cast<std::size_t>(r)]) < 1e-12);
        CHECK(dense(r, r).imag() == 0.0);
    }

    // Fast path and term expansion agree on random states.
    const PauliSumHamiltonian terms_only(4, h.terms());
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = oracles::random_state(4, rng);
        CHECK(h.expectation(psi) ==
              doctest::Approx(terms_only.expectation(psi)).epsilon(1e-10));
    }
}

TEST_CASE("satisfiability shows up as a zero diagonal minimum") {
    Rng rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        const int nv = 3 + static_cast<int>(rng.below(3));
        SatFormula f;
        f.num_vars = nv;
        const int nc = 4 + static_cast<int>(rng.below(12));
        for (int c = 0; c < nc; ++c) {
            std::array<SatLiteral, 3> clause{};
            int v0 = static_cast<int>(rng.below(nv));
            int v1 = v0, v2 = v0;
            while (v1 == v0) v1 = static_cast<int>(rng.below(nv));
            while (v2 == v0 || v2 == v1) v2 = static_cast<int>(rng.below(nv));
            clause[0] = {v0, rng.below(2) == 0};
            clause[1] = {v1, rng.below(2) == 0};
            clause[2] = {v2, rng.below(2) == 0};
            f.clauses.push_back(clause);
        }
        const auto h = sat_to_hamiltonian(f);
        const double lowest = *std::min_element(h.diagonal().begin(), h.diagonal().end());
        const bool satisfiable = count_solutions(f) > 0;
        CHECK((lowest == 0.0) == satisfiable);
    }
}

TEST_CASE("unique 3sat generation") {
    const SatFormula f = generate_unique_3sat(4, 18, 1);
    CHECK(count_solutions(f) == 1);
    const SatFormula again = generate_unique_3sat(4, 18, 1);
    CHECK(to_dimacs(f) == to_dimacs(again));

    const SatFormula other = generate_unique_3sat(5, 22, 2);
    CHECK(count_solutions(other) == 1);

    // Round trip through DIMACS text.
    const SatFormula back = parse_cnf(to_dimacs(f));
    CHECK(to_dimacs(back) == to_dimacs(f));

    // 3 clauses can rule out at most 24 of 64 assignments, never 63.
    CHECK_THROWS_AS(generate_unique_3sat(6, 3, 1), BudgetError);
    CHECK_THROWS_AS(generate_unique_3sat(2, 5, 1), ValidationError);
    CHECK_THROWS_AS(generate_unique_3sat(21, 90, 1), ValidationError);
}

TEST_CASE("exact eigenvalues use the diagonal fast path") {
    const auto h = sat_to_hamiltonian(parse_cnf("p cnf 3 1\n1 2 3 0\n"));
    const auto evals = exact_eigenvalues(h);
    REQUIRE(evals.size() == 8);
    CHECK(evals[0] == 0.0);
    CHECK(evals[7] == 1.0);
    CHECK(std::is_sorted(evals.begin(), evals.end()));

    const auto x0 = parse_pauli_sum("qubits 1\n1 X0\n");
    const auto xe = exact_eigenvalues(x0);
    CHECK(xe[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(xe[1] == doctest::Approx(1.0).epsilon(1e-12));
}
