#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"
#include "qspect/ansatz.hpp"
#include "qspect/errors.hpp"
#include "qspect/rng.hpp"
#include "support/oracles.hpp"

using namespace qspect;

namespace {

bool covers_all_params(const Ansatz& a) {
    std::vector<char> used(static_cast<std::size_t>(a.num_params), 0);
    for (const Gate& g : a.gates) {
        if (g.parameter_index >= 0) used[static_cast<std::size_t>(g.parameter_index)] = 1;
    }
    for (char c : used) {
        if (!c) return false;
    }
    return true;
}

double max_component_gap(const DerivativeVector& a, const DerivativeVector& b) {
    REQUIRE(a.components.size() == b.components.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.components.size(); ++k) {
        worst = std::max(worst, std::abs(a.components[k] - b.components[k]));
    }
    return worst;
}

double norm_sq(const DerivativeVector& d) {
    double s = 0.0;
    for (cplx c : d.components) s += std::norm(c);
    return s;
}

}  // namespace

TEST_CASE("compact builder produces params_per_qubit * num_qubits parameters") {
    CHECK(build_compact(18).num_params == 126);
    CHECK(build_compact(16).num_params == 112);
    CHECK(build_compact(10).num_params == 70);
    CHECK(build_compact(6).num_params == 42);
    CHECK(build_compact(4, 5).num_params == 20);

    const Ansatz a = build_compact(5);
    CHECK(a.num_qubits == 5);
    CHECK(a.family == AnsatzFamily::Compact);
    CHECK(covers_all_params(a));
    CHECK_NOTHROW(validate(a));

    CHECK_THROWS_AS(build_compact(1), ValidationError);
    CHECK_THROWS_AS(build_compact(3, 0), ValidationError);
}

TEST_CASE("lowdepth builder truncates to the requested parameter count") {
    CHECK(build_lowdepth(6, 56).num_params == 56);
    CHECK(build_lowdepth(10, 145).num_params == 145);
    CHECK(build_lowdepth(2, 3).num_params == 3);

    for (int target : {1, 7, 31, 56}) {
        const Ansatz a = build_lowdepth(4, target);
        CHECK(a.num_params == target);
        CHECK(a.family == AnsatzFamily::LowDepth);
        CHECK(covers_all_params(a));
        CHECK_NOTHROW(validate(a));
    }

    CHECK_THROWS_AS(build_lowdepth(2, 0), ConfigError);
    CHECK_THROWS_AS(build_lowdepth(1, 4), ValidationError);
}

TEST_CASE("rotation chain acts on a single qubit") {
    const Ansatz a = build_rotation_chain(5);
    CHECK(a.num_qubits == 1);
    CHECK(a.num_params == 5);
    CHECK(a.gates.size() == 5);
    CHECK(covers_all_params(a));
    CHECK_NOTHROW(validate(a));
    CHECK_THROWS_AS(build_rotation_chain(0), ValidationError);
}

TEST_CASE("evaluate prepares the all-zeros state at theta = 0") {
    for (const Ansatz& a : {build_compact(3), build_lowdepth(2, 3), build_lowdepth(3, 10),
                            build_rotation_chain(4)}) {
        const std::vector<double> theta(static_cast<std::size_t>(a.num_params), 0.0);
        const StateVector st = evaluate(a, theta);
        CHECK(std::abs(st.amps()[0] - cplx{1.0, 0.0}) < 1e-15);
        for (std::size_t k = 1; k < st.amps().size(); ++k) {
            CHECK(std::abs(st.amps()[k]) < 1e-15);
        }
    }
}

TEST_CASE("evaluate applies a lone RY rotation exactly") {
    const Ansatz a = build_rotation_chain(1);
    for (double theta : {3.14159265358979312 / 2.0, 1.234, -0.7}) {
        const std::vector<double> t = {theta};
        const StateVector st = evaluate(a, t);
        CHECK(std::abs(st.amps()[0] - cplx{std::cos(theta / 2.0), 0.0}) < 1e-15);
        CHECK(std::abs(st.amps()[1] - cplx{std::sin(theta / 2.0), 0.0}) < 1e-15);
    }
}

TEST_CASE("evaluate keeps the state normalized for random parameters") {
    Rng rng(41);
    const Ansatz compact = build_compact(4, 5);
    const Ansatz lowdepth = build_lowdepth(3, 11);
    for (int trial = 0; trial < 100; ++trial) {
        const Ansatz& a = trial % 2 == 0 ? compact : lowdepth;
        const std::vector<double> theta = oracles::random_theta(a.num_params, rng);
        CHECK(evaluate(a, theta).norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("evaluate rejects a parameter vector of the wrong length") {
    const Ansatz a = build_compact(2, 3);
    const std::vector<double> theta(5, 0.0);
    CHECK_THROWS_AS(evaluate(a, theta), ValidationError);
}

TEST_CASE("finite-difference derivative of a lone RY matches the closed form") {
    const Ansatz a = build_rotation_chain(1);

    const std::vector<double> zero = {0.0};
    const DerivativeVector at_zero = derivative_fd(a, zero, 0);
    CHECK(at_zero.param_index == 0);
    CHECK(std::abs(at_zero.components[0]) < 1e-9);
    CHECK(std::abs(at_zero.components[1] - cplx{0.5, 0.0}) < 1e-9);
    CHECK(norm_sq(at_zero) == doctest::Approx(0.25).epsilon(1e-9));

    const std::vector<double> t = {0.8};
    const DerivativeVector d = derivative_fd(a, t, 0);
    CHECK(std::abs(d.components[0] - cplx{-std::sin(0.4) / 2.0, 0.0}) < 1e-9);
    CHECK(std::abs(d.components[1] - cplx{std::cos(0.4) / 2.0, 0.0}) < 1e-9);

    CHECK_THROWS_AS(derivative_fd(a, t, 1), ValidationError);
    CHECK_THROWS_AS(derivative_fd(a, t, 0, 0.0), ValidationError);
}

TEST_CASE("derivative of an unused parameter is the zero vector") {
    Ansatz a;
    a.num_qubits = 2;
    a.num_params = 2;
    a.gates = {Gate::ry(0, 0)};
    const std::vector<double> theta = {0.3, 1.7};
    for (const DerivativeVector& d : {derivative_fd(a, theta, 1), derivative_analytic(a, theta, 1)}) {
        CHECK(d.param_index == 1);
        for (cplx c : d.components) CHECK(c == cplx{0.0, 0.0});
    }
}

TEST_CASE("analytic derivative of RY and RZ gates matches hand differentiation") {
    const Ansatz ry = build_rotation_chain(1);
    for (double theta : {0.0, 0.7, -1.3}) {
        const std::vector<double> t = {theta};
        const DerivativeVector d = derivative_analytic(ry, t, 0);
        CHECK(std::abs(d.components[0] - cplx{-std::sin(theta / 2.0) / 2.0, 0.0}) < 1e-14);
        CHECK(std::abs(d.components[1] - cplx{std::cos(theta / 2.0) / 2.0, 0.0}) < 1e-14);
    }

    Ansatz rz;
    rz.num_qubits = 1;
    rz.num_params = 1;
    rz.gates = {Gate::rz(0, 0)};
    for (double theta : {0.0, 1.1}) {
        const std::vector<double> t = {theta};
        const DerivativeVector d = derivative_analytic(rz, t, 0);
        const cplx expected = cplx{0.0, -0.5} * std::exp(cplx{0.0, -theta / 2.0});
        CHECK(std::abs(d.components[0] - expected) < 1e-14);
        CHECK(std::abs(d.components[1]) < 1e-14);
        CHECK(norm_sq(d) == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("a parameter shared by two gates differentiates to the sum of insertions") {
    Ansatz shared;
    shared.num_qubits = 2;
    shared.num_params = 1;
    shared.gates = {Gate::ry(0, 0), Gate::ry(1, 0)};

    Ansatz split;
    split.num_qubits = 2;
    split.num_params = 2;
    split.gates = {Gate::ry(0, 0), Gate::ry(1, 1)};

    const std::vector<double> one = {0.9};
    const std::vector<double> two = {0.9, 0.9};
    const DerivativeVector whole = derivative_analytic(shared, one, 0);
    const DerivativeVector first = derivative_analytic(split, two, 0);
    const DerivativeVector second = derivative_analytic(split, two, 1);
    for (std::size_t k = 0; k < whole.components.size(); ++k) {
        CHECK(std::abs(whole.components[k] - first.components[k] - second.components[k]) < 1e-14);
    }

    CHECK(max_component_gap(whole, derivative_fd(shared, one, 0)) < 1e-8);
}

TEST_CASE("finite differences agree with generator insertion on random circuits") {
    Rng rng(58);
    const Ansatz pool[] = {build_compact(4, 4), build_lowdepth(4, 15), build_compact(6, 2),
                           build_lowdepth(6, 20), build_rotation_chain(6)};
    for (int trial = 0; trial < 50; ++trial) {
        const Ansatz& a = pool[trial % 5];
        const std::vector<double> theta = oracles::random_theta(a.num_params, rng);
        const int param = static_cast<int>(rng.below(static_cast<std::uint64_t>(a.num_params)));
        const DerivativeVector fd = derivative_fd(a, theta, param);
        const DerivativeVector an = derivative_analytic(a, theta, param);
        CHECK(max_component_gap(fd, an) < 1e-7);
    }
}

TEST_CASE("unitarity makes the real overlap with any derivative vanish") {
    Rng rng(99);
    for (const Ansatz& a : {build_compact(4, 5), build_lowdepth(4, 20)}) {
        for (int draw = 0; draw < 3; ++draw) {
            const std::vector<double> theta = oracles::random_theta(a.num_params, rng);
            const StateVector st = evaluate(a, theta);
            for (int i = 0; i < a.num_params; ++i) {
                const DerivativeVector d = derivative_analytic(a, theta, i);
                cplx overlap = 0.0;
                for (std::size_t k = 0; k < d.components.size(); ++k) {
                    overlap += std::conj(st.amps()[k]) * d.components[k];
                }
                CHECK(std::abs(overlap.real()) < 1e-9);
            }
        }
    }
}

TEST_CASE("parse_ansatz reads the custom gate-list format") {
    const Ansatz a = parse_ansatz(
        "# two-qubit demo\n"
        "qubits 2\n"
        "params 3\n"
        "RY q0 p0\n"
        "CRY q0 q1 p1\n"
        "RZ q1 p2\n"
        "CZ q0 q1\n");
    CHECK(a.num_qubits == 2);
    CHECK(a.num_params == 3);
    CHECK(a.family == AnsatzFamily::Custom);
    REQUIRE(a.gates.size() == 4);
    CHECK(a.gates[0].kind == GateKind::RY);
    CHECK(a.gates[0].target == 0);
    CHECK(a.gates[1].kind == GateKind::CRY);
    CHECK(a.gates[1].control == 0);
    CHECK(a.gates[1].target == 1);
    CHECK(a.gates[1].parameter_index == 1);
    CHECK(a.gates[3].kind == GateKind::CZ);

    const std::vector<double> zero(3, 0.0);
    CHECK(std::abs(evaluate(a, zero).amps()[0] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("parse_ansatz rejects malformed input") {
    CHECK_THROWS_AS(parse_ansatz("qubits 2\nparams 1\nFOO q0 p0\n"), ParseError);
    CHECK_THROWS_AS(parse_ansatz("qubits 2\nparams 2\nRY q0 p0\n"), ParseError);
    CHECK_THROWS_AS(parse_ansatz("params 1\nRY q0 p0\n"), ParseError);
    CHECK_THROWS_AS(parse_ansatz("qubits 2\nqubits 2\nparams 1\nRY q0 p0\n"), ParseError);
    CHECK_THROWS_AS(parse_ansatz("qubits 2\nparams 1\nRY q5 p0\n"), ParseError);
    CHECK_THROWS_AS(parse_ansatz("qubits 2\nparams 1\nRY q0 p0 junk\n"), ParseError);
    CHECK_THROWS_AS(parse_ansatz("qubits 2\nparams 1\nRY q0 p4\n"), ParseError);
    CHECK_THROWS_AS(parse_ansatz("qubits 2\nparams 1\nRY q0\n"), ParseError);

    try {
        parse_ansatz("qubits 2\nparams 1\nRY x0 p0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("validate rejects inconsistent circuits") {
    Ansatz a;
    a.num_qubits = 0;
    CHECK_THROWS_AS(validate(a), ValidationError);

    a.num_qubits = 2;
    a.num_params = 1;
    a.gates = {Gate::ry(0, 3)};
    CHECK_THROWS_AS(validate(a), ValidationError);

    Ansatz bad_cz;
    bad_cz.num_qubits = 2;
    bad_cz.num_params = 1;
    Gate g = Gate::cz(0, 1);
    g.parameter_index = 0;
    bad_cz.gates = {g};
    CHECK_THROWS_AS(validate(bad_cz), ValidationError);
    const std::vector<double> theta = {0.5};
    CHECK_THROWS_AS(derivative_analytic(bad_cz, theta, 0), ValidationError);
}
