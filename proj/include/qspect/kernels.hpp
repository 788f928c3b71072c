#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace qspect {

using cplx = std::complex<double>;

/// 2x2 unitary acting on one qubit.
struct Mat2 {
    cplx m00, m01, m10, m11;
};

// Amplitude-level kernels. `kernels` is the production set: loops are
// OpenMP-parallel above a size cutoff, and every reduction accumulates
// fixed-size chunk partials that are combined in chunk order, so results are
// bit-for-bit reproducible for any thread count. `kernels_ref` implements the
// same operations as plain serial loops with naive left-to-right summation;
// it is the reference the tests and the benchmark compare against.
//
// Gate kernels write each amplitude (or amplitude pair) exactly once, so the
// parallel and serial variants agree bitwise. Reductions may differ from the
// reference in the last ulps because the summation order differs.

#define QSPECT_DECLARE_KERNELS                                                              \
    /* amps[i0], amps[i1] <- u * (amps[i0], amps[i1]) over all target-bit pairs */          \
    void apply_1q(std::span<cplx> amps, int target, const Mat2& u);                         \
    /* same, restricted to indices with the control bit set */                              \
    void apply_controlled_1q(std::span<cplx> amps, int control, int target, const Mat2& u); \
    /* phase -1 where both bits are set */                                                  \
    void apply_cz(std::span<cplx> amps, int a, int b);                                      \
    /* swap qubits a and b where the control bit is set (Fredkin) */                        \
    void apply_cswap(std::span<cplx> amps, int control, int a, int b);                      \
    /* out[k] = weight * (-1)^popcount((k^flip) & phase_mask) * in[k^flip] */               \
    void pauli_apply(std::span<const cplx> in, std::span<cplx> out, std::uint64_t flip,     \
                     std::uint64_t phase_mask, cplx weight);                                \
    /* out[k] += weight * (-1)^popcount((k^flip) & phase_mask) * in[k^flip] */              \
    void pauli_accumulate(std::span<const cplx> in, std::span<cplx> out, std::uint64_t flip,\
                          std::uint64_t phase_mask, cplx weight);                           \
    /* <in|P|in> for the Pauli product encoded by (flip, phase_mask, weight) */             \
    cplx pauli_expectation(std::span<const cplx> in, std::uint64_t flip,                    \
                           std::uint64_t phase_mask, cplx weight);                          \
    /* sum conj(a[k]) * b[k] */                                                             \
    cplx inner(std::span<const cplx> a, std::span<const cplx> b);                           \
    /* sum |a[k]|^2 */                                                                      \
    double norm_sq(std::span<const cplx> a);                                                \
    /* out[k] = diag[k] * in[k] */                                                          \
    void diag_apply(std::span<const cplx> in, std::span<cplx> out,                          \
                    std::span<const double> diag);                                          \
    /* sum diag[k] * |in[k]|^2 */                                                           \
    double diag_expectation(std::span<const cplx> in, std::span<const double> diag);        \
    /* y[k] += alpha * x[k] */                                                              \
    void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x);                      \
    /* a[k] *= s */                                                                         \
    void scale(std::span<cplx> a, cplx s);                                                  \
    /* zero amplitudes whose `qubit` bit is 0 (projector onto |1>) */                       \
    void project_one(std::span<cplx> amps, int qubit);

namespace kernels {
QSPECT_DECLARE_KERNELS
}

namespace kernels_ref {
QSPECT_DECLARE_KERNELS
}

#undef QSPECT_DECLARE_KERNELS

}  // namespace qspect
