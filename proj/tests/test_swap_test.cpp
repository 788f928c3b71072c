#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "qspect/ansatz.hpp"
#include "qspect/errors.hpp"
#include "qspect/rng.hpp"
#include "qspect/state_vector.hpp"
#include "qspect/swap_test.hpp"
#include "support/oracles.hpp"

using namespace qspect;

namespace {

StateVector basis_state(int num_qubits, std::uint64_t index) {
    StateVector st(num_qubits);
    st[0] = 0.0;
    st[index] = 1.0;
    return st;
}

StateVector plus_state() {
    StateVector st(1);
    st.apply(Gate::h(0));
    return st;
}

StateVector orthogonalize(const StateVector& psi, StateVector phi) {
    const cplx overlap = inner_product(psi, phi);
    for (std::size_t k = 0; k < phi.amps().size(); ++k) {
        phi[k] -= overlap * psi.amps()[k];
    }
    phi.normalize();
    return phi;
}

}  // namespace

TEST_CASE("shallow swap test reproduces the textbook overlaps") {
    Rng rng(5);
    const StateVector psi = oracles::random_state(3, rng);
    CHECK(shallow_swap_overlap(psi, psi).overlap_estimate == doctest::Approx(1.0).epsilon(1e-12));

    const SwapTestOutcome orthogonal = shallow_swap_overlap(basis_state(1, 0), basis_state(1, 1));
    CHECK(orthogonal.overlap_estimate == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(orthogonal.prob_both_ones.size() == 1);
    CHECK(orthogonal.prob_both_ones[0] == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(shallow_swap_overlap(plus_state(), basis_state(1, 0)).overlap_estimate ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("shallow swap test equals the squared inner product") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const int num_qubits = 1 + trial % 5;
        const StateVector psi = oracles::random_state(num_qubits, rng);
        const StateVector phi =
            trial % 4 == 0 ? psi : oracles::random_state(num_qubits, rng);
        const SwapTestOutcome out = shallow_swap_overlap(psi, phi);
        CHECK(out.overlap_estimate ==
              doctest::Approx(std::norm(inner_product(psi, phi))).epsilon(1e-12));
        CHECK(out.overlap_estimate >= -1e-12);
        CHECK(out.overlap_estimate <= 1.0 + 1e-12);
        CHECK(out.prob_both_ones.size() == static_cast<std::size_t>(num_qubits));
    }
}

TEST_CASE("shallow swap test rejects mismatched registers") {
    CHECK_THROWS_AS(shallow_swap_overlap(StateVector(1), StateVector(2)), ValidationError);
}

TEST_CASE("conventional swap test on identical states has a certain ancilla") {
    const ConventionalSwapResult r = conventional_swap(basis_state(1, 0), basis_state(1, 0));
    CHECK(r.p_ancilla_0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(r.registers_minus.has_value());
    CHECK(r.registers_plus.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conventional swap test splits orthogonal inputs into Bell-like registers") {
    const ConventionalSwapResult r = conventional_swap(basis_state(1, 0), basis_state(1, 1));
    CHECK(r.p_ancilla_0 == doctest::Approx(0.5).epsilon(1e-12));

    const auto& plus = r.registers_plus.amps();
    CHECK(std::abs(plus[0]) < 1e-12);
    CHECK(std::abs(plus[3]) < 1e-12);
    CHECK(std::abs(plus[1]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(plus[2]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK((plus[1] * std::conj(plus[2])).real() > 0.0);

    REQUIRE(r.registers_minus.has_value());
    const auto& minus = r.registers_minus->amps();
    CHECK(std::abs(minus[1]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(minus[2]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK((minus[1] * std::conj(minus[2])).real() < 0.0);
}

TEST_CASE("conventional swap ancilla statistics follow the overlap") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const int num_qubits = 1 + trial % 4;
        const StateVector psi = oracles::random_state(num_qubits, rng);
        const StateVector phi = oracles::random_state(num_qubits, rng);
        const ConventionalSwapResult r = conventional_swap(psi, phi);
        const double expected = (1.0 + std::norm(inner_product(psi, phi))) / 2.0;
        CHECK(r.p_ancilla_0 == doctest::Approx(expected).epsilon(1e-12));
        CHECK(r.registers_plus.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(r.registers_minus.has_value());
        CHECK(r.registers_minus->norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(conventional_swap(StateVector(2), StateVector(3)), ValidationError);
}

TEST_CASE("conventional swap registers realize the symmetric combinations") {
    Rng rng(37);
    for (int trial = 0; trial < 6; ++trial) {
        const int num_qubits = 1 + trial % 3;
        const StateVector psi = oracles::random_state(num_qubits, rng);
        const StateVector phi = orthogonalize(psi, oracles::random_state(num_qubits, rng));
        const ConventionalSwapResult r = conventional_swap(psi, phi);

        const std::uint64_t dim = psi.amps().size();
        std::vector<cplx> plus_ref(dim * dim);
        std::vector<cplx> minus_ref(dim * dim);
        for (std::uint64_t hi = 0; hi < dim; ++hi) {
            for (std::uint64_t lo = 0; lo < dim; ++lo) {
                const cplx fwd = psi.amps()[lo] * phi.amps()[hi];
                const cplx rev = phi.amps()[lo] * psi.amps()[hi];
                plus_ref[hi * dim + lo] = (fwd + rev) / std::sqrt(2.0);
                minus_ref[hi * dim + lo] = (fwd - rev) / std::sqrt(2.0);
            }
        }
        const StateVector plus_expected(2 * num_qubits, std::move(plus_ref));
        const StateVector minus_expected(2 * num_qubits, std::move(minus_ref));

        CHECK(std::abs(inner_product(plus_expected, r.registers_plus)) ==
              doctest::Approx(1.0).epsilon(1e-10));
        REQUIRE(r.registers_minus.has_value());
        CHECK(std::abs(inner_product(minus_expected, *r.registers_minus)) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("symmetry check classifies register states") {
    PauliTerm z0;
    z0.coefficient = 1.0;
    z0.ops = {{0, Pauli::Z}};
    const PauliSumHamiltonian s(1, {z0});

    const SymmetryCheckResult aligned = symmetry_check(basis_state(2, 0b00), s);
    CHECK(aligned.is_invariant);
    CHECK(aligned.expectation == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(aligned.deviation < 1e-10);

    const ConventionalSwapResult r = conventional_swap(basis_state(1, 0), basis_state(1, 1));
    const SymmetryCheckResult mixed = symmetry_check(r.registers_plus, s);
    CHECK(mixed.is_invariant);
    CHECK(mixed.expectation == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mixed.deviation < 1e-10);

    std::vector<cplx> amps = {cplx{1.0 / std::sqrt(2.0), 0.0}, cplx{1.0 / std::sqrt(2.0), 0.0},
                              cplx{0.0, 0.0}, cplx{0.0, 0.0}};
    const StateVector plus_zero(2, std::move(amps));
    const SymmetryCheckResult broken = symmetry_check(plus_zero, s);
    CHECK_FALSE(broken.is_invariant);
    CHECK(broken.deviation > 1e-6);

    CHECK_THROWS_AS(symmetry_check(StateVector(3), s), ValidationError);
}

TEST_CASE("hadamard test reads out known amplitudes") {
    Ansatz identity;
    identity.num_qubits = 1;
    identity.num_params = 0;
    CHECK(hadamard_test(identity, {}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hadamard_test(identity, {}, 3.14159265358979323846 / 2.0) ==
          doctest::Approx(0.0).epsilon(1e-12));

    Ansatz flip;
    flip.num_qubits = 1;
    flip.num_params = 0;
    flip.gates = {Gate::x(0)};
    CHECK(hadamard_test(flip, {}, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hadamard test at two phases reconstructs the bare amplitude") {
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const Ansatz a = trial % 2 == 0 ? build_compact(3, 4) : build_lowdepth(3, 10);
        const std::vector<double> theta = oracles::random_theta(a.num_params, rng);
        const cplx reconstructed =
            cplx{hadamard_test(a, theta, 0.0),
                 -hadamard_test(a, theta, 3.14159265358979323846 / 2.0)};
        const cplx direct = evaluate(a, theta).amps()[0];
        CHECK(std::abs(reconstructed - direct) < 1e-12);
    }
}
