#include "qspect/kernels.hpp"

#include <algorithm>
#include <bit>
#include <vector>

namespace qspect::kernels {

namespace {

// Chunk size for deterministic reductions: partial sums are computed per
// 4096-amplitude chunk and combined in chunk order, independent of threading.
constexpr std::int64_t kChunk = 4096;

// Loops shorter than this are not worth a parallel region.
constexpr std::int64_t kParCutoff = 1 << 14;

// Spread k over the bit positions of an n-bit word leaving a 0 hole at `bit`.
inline std::uint64_t insert_zero(std::uint64_t k, int bit) {
    const std::uint64_t low = k & ((std::uint64_t{1} << bit) - 1);
    return ((k >> bit) << (bit + 1)) | low;
}

}  // namespace

void apply_1q(std::span<cplx> amps, int target, const Mat2& u) {
    const std::int64_t pairs = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t tbit = std::uint64_t{1} << target;
#pragma omp parallel for schedule(static) if (pairs >= kParCutoff)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::uint64_t i0 = insert_zero(static_cast<std::uint64_t>(k), target);
        const std::uint64_t i1 = i0 | tbit;
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = u.m00 * a0 + u.m01 * a1;
        amps[i1] = u.m10 * a0 + u.m11 * a1;
    }
}

void apply_controlled_1q(std::span<cplx> amps, int control, int target, const Mat2& u) {
    const std::int64_t quads = static_cast<std::int64_t>(amps.size() / 4);
    const int lo = std::min(control, target);
    const int hi = std::max(control, target);
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t tbit = std::uint64_t{1} << target;
#pragma omp parallel for schedule(static) if (quads >= kParCutoff)
    for (std::int64_t k = 0; k < quads; ++k) {
        const std::uint64_t base = insert_zero(insert_zero(static_cast<std::uint64_t>(k), lo), hi);
        const std::uint64_t i0 = base | cbit;
        const std::uint64_t i1 = i0 | tbit;
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = u.m00 * a0 + u.m01 * a1;
        amps[i1] = u.m10 * a0 + u.m11 * a1;
    }
}

void apply_cz(std::span<cplx> amps, int a, int b) {
    const std::int64_t n = static_cast<std::int64_t>(amps.size());
    const std::uint64_t mask = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) {
        if ((static_cast<std::uint64_t>(k) & mask) == mask) amps[k] = -amps[k];
    }
}

void apply_cswap(std::span<cplx> amps, int control, int a, int b) {
    const std::int64_t n = static_cast<std::int64_t>(amps.size());
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t abit = std::uint64_t{1} << a;
    const std::uint64_t bbit = std::uint64_t{1} << b;
    // Visit each swapped pair once via the (a=1, b=0) representative.
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) {
        const std::uint64_t uk = static_cast<std::uint64_t>(k);
        if ((uk & cbit) && (uk & abit) && !(uk & bbit)) {
            const std::uint64_t j = uk ^ abit ^ bbit;
            std::swap(amps[k], amps[j]);
        }
    }
}

void pauli_apply(std::span<const cplx> in, std::span<cplx> out, std::uint64_t flip,
                 std::uint64_t phase_mask, cplx weight) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) {
        const std::uint64_t src = static_cast<std::uint64_t>(k) ^ flip;
        const double sign = (std::popcount(src & phase_mask) & 1) ? -1.0 : 1.0;
        out[k] = weight * sign * in[src];
    }
}

void pauli_accumulate(std::span<const cplx> in, std::span<cplx> out, std::uint64_t flip,
                      std::uint64_t phase_mask, cplx weight) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) {
        const std::uint64_t src = static_cast<std::uint64_t>(k) ^ flip;
        const double sign = (std::popcount(src & phase_mask) & 1) ? -1.0 : 1.0;
        out[k] += weight * sign * in[src];
    }
}

namespace {

// Deterministic chunked reduction over [0, n). `body(i)` yields the summand.
template <typename T, typename Body>
T chunked_sum(std::int64_t n, Body body) {
    const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
    if (nchunks <= 1) {
        T acc{};
        for (std::int64_t i = 0; i < n; ++i) acc += body(i);
        return acc;
    }
    std::vector<T> partial(static_cast<std::size_t>(nchunks));
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t lo = c * kChunk;
        const std::int64_t hi = std::min(n, lo + kChunk);
        T acc{};
        for (std::int64_t i = lo; i < hi; ++i) acc += body(i);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

}  // namespace

cplx pauli_expectation(std::span<const cplx> in, std::uint64_t flip, std::uint64_t phase_mask,
                       cplx weight) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
    return weight * chunked_sum<cplx>(n, [&](std::int64_t k) {
               const std::uint64_t src = static_cast<std::uint64_t>(k) ^ flip;
               const double sign = (std::popcount(src & phase_mask) & 1) ? -1.0 : 1.0;
               return std::conj(in[k]) * (sign * in[src]);
           });
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    return chunked_sum<cplx>(n, [&](std::int64_t i) { return std::conj(a[i]) * b[i]; });
}

double norm_sq(std::span<const cplx> a) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    return chunked_sum<double>(n, [&](std::int64_t i) { return std::norm(a[i]); });
}

void diag_apply(std::span<const cplx> in, std::span<cplx> out, std::span<const double> diag) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) out[k] = diag[k] * in[k];
}

double diag_expectation(std::span<const cplx> in, std::span<const double> diag) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
    return chunked_sum<double>(n, [&](std::int64_t k) { return diag[k] * std::norm(in[k]); });
}

void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
    const std::int64_t n = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void scale(std::span<cplx> a, cplx s) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) a[k] *= s;
}

void project_one(std::span<cplx> amps, int qubit) {
    const std::int64_t n = static_cast<std::int64_t>(amps.size());
    const std::uint64_t qbit = std::uint64_t{1} << qubit;
#pragma omp parallel for schedule(static) if (n >= kParCutoff)
    for (std::int64_t k = 0; k < n; ++k) {
        if (!(static_cast<std::uint64_t>(k) & qbit)) amps[k] = cplx{0.0, 0.0};
    }
}

}  // namespace qspect::kernels
