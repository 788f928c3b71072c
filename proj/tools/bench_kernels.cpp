#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "qspect/kernels.hpp"
#include "qspect/rng.hpp"
#include "qspect/state_vector.hpp"

namespace {

using namespace qspect;

std::vector<cplx> random_amps(std::uint64_t n, Rng& rng) {
    std::vector<cplx> a(n);
    for (auto& x : a) x = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return a;
}

template <typename F>
double time_ms(F&& body, int reps) {
    using clock = std::chrono::steady_clock;
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock::now();
        body();
        const auto t1 = clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

double max_dev(std::span<const cplx> a, std::span<const cplx> b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

void row(const char* name, int qubits, double par_ms, double ref_ms, double dev) {
    std::printf("%-22s %6d %12.3f %12.3f %8.2fx %9.1e\n", name, qubits, par_ms, ref_ms,
                par_ms > 0.0 ? ref_ms / par_ms : 0.0, dev);
}

void bench(int qubits, int reps, Rng& rng) {
    const std::uint64_t n = std::uint64_t{1} << qubits;
    const std::vector<cplx> base = random_amps(n, rng);
    const int mid = qubits / 2;
    const Mat2 u = gate_matrix(GateKind::RY, 0.731);

    std::vector<cplx> a = base, b = base;
    const double t_par = time_ms([&] { kernels::apply_1q(a, mid, u); }, reps);
    const double t_ref = time_ms([&] { kernels_ref::apply_1q(b, mid, u); }, reps);
    row("apply_1q", qubits, t_par, t_ref, max_dev(a, b));

    a = base;
    b = base;
    const double tc_par =
        time_ms([&] { kernels::apply_controlled_1q(a, 0, qubits - 1, u); }, reps);
    const double tc_ref =
        time_ms([&] { kernels_ref::apply_controlled_1q(b, 0, qubits - 1, u); }, reps);
    row("apply_controlled_1q", qubits, tc_par, tc_ref, max_dev(a, b));

    const PauliOp ops[] = {{0, Pauli::X}, {mid, Pauli::Y}, {qubits - 1, Pauli::Z}};
    const PauliMasks masks = pauli_masks(ops, qubits);
    const cplx w = i_power(masks.y_count);
    std::vector<cplx> out_par(n), out_ref(n);
    const double tp_par =
        time_ms([&] { kernels::pauli_apply(base, out_par, masks.flip, masks.phase, w); }, reps);
    const double tp_ref = time_ms(
        [&] { kernels_ref::pauli_apply(base, out_ref, masks.flip, masks.phase, w); }, reps);
    row("pauli_apply", qubits, tp_par, tp_ref, max_dev(out_par, out_ref));

    cplx e_par = 0.0, e_ref = 0.0;
    const double te_par = time_ms(
        [&] { e_par = kernels::pauli_expectation(base, masks.flip, masks.phase, w); }, reps);
    const double te_ref = time_ms(
        [&] { e_ref = kernels_ref::pauli_expectation(base, masks.flip, masks.phase, w); }, reps);
    row("pauli_expectation", qubits, te_par, te_ref, std::abs(e_par - e_ref));

    cplx i_par = 0.0, i_ref = 0.0;
    const double ti_par = time_ms([&] { i_par = kernels::inner(base, out_par); }, reps);
    const double ti_ref = time_ms([&] { i_ref = kernels_ref::inner(base, out_ref); }, reps);
    row("inner", qubits, ti_par, ti_ref, std::abs(i_par - i_ref));

    double n_par = 0.0, n_ref = 0.0;
    const double tn_par = time_ms([&] { n_par = kernels::norm_sq(base); }, reps);
    const double tn_ref = time_ms([&] { n_ref = kernels_ref::norm_sq(base); }, reps);
    row("norm_sq", qubits, tn_par, tn_ref, std::abs(n_par - n_ref));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compare the OpenMP kernels against the serial reference"};
    std::vector<int> qubit_sizes = {14, 18, 20};
    int reps = 5;
    std::uint64_t seed = 7;
    app.add_option("--qubits", qubit_sizes, "statevector sizes to benchmark")
        ->capture_default_str();
    app.add_option("--reps", reps, "repetitions per kernel (best time kept)")
        ->capture_default_str();
    app.add_option("--seed", seed, "rng seed for the input state");
    CLI11_PARSE(app, argc, argv);

    Rng rng(seed);
    std::printf("%-22s %6s %12s %12s %9s %9s\n", "kernel", "qubits", "parallel ms", "serial ms",
                "ratio", "max dev");
    for (const int q : qubit_sizes) bench(q, reps, rng);
    return 0;
}
