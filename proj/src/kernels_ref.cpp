#include "qspect/kernels.hpp"

#include <algorithm>
#include <bit>

namespace qspect::kernels_ref {

namespace {

inline std::uint64_t insert_zero(std::uint64_t k, int bit) {
    const std::uint64_t low = k & ((std::uint64_t{1} << bit) - 1);
    return ((k >> bit) << (bit + 1)) | low;
}

}  // namespace

void apply_1q(std::span<cplx> amps, int target, const Mat2& u) {
    const std::uint64_t pairs = amps.size() / 2;
    const std::uint64_t tbit = std::uint64_t{1} << target;
    for (std::uint64_t k = 0; k < pairs; ++k) {
        const std::uint64_t i0 = insert_zero(k, target);
        const std::uint64_t i1 = i0 | tbit;
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = u.m00 * a0 + u.m01 * a1;
        amps[i1] = u.m10 * a0 + u.m11 * a1;
    }
}

void apply_controlled_1q(std::span<cplx> amps, int control, int target, const Mat2& u) {
    const std::uint64_t quads = amps.size() / 4;
    const int lo = std::min(control, target);
    const int hi = std::max(control, target);
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t tbit = std::uint64_t{1} << target;
    for (std::uint64_t k = 0; k < quads; ++k) {
        const std::uint64_t base = insert_zero(insert_zero(k, lo), hi);
        const std::uint64_t i0 = base | cbit;
        const std::uint64_t i1 = i0 | tbit;
        const cplx a0 = amps[i0];
        const cplx a1 = amps[i1];
        amps[i0] = u.m00 * a0 + u.m01 * a1;
        amps[i1] = u.m10 * a0 + u.m11 * a1;
    }
}

void apply_cz(std::span<cplx> amps, int a, int b) {
    const std::uint64_t mask = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
    for (std::uint64_t k = 0; k < amps.size(); ++k) {
        if ((k & mask) == mask) amps[k] = -amps[k];
    }
}

void apply_cswap(std::span<cplx> amps, int control, int a, int b) {
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t abit = std::uint64_t{1} << a;
    const std::uint64_t bbit = std::uint64_t{1} << b;
    for (std::uint64_t k = 0; k < amps.size(); ++k) {
        if ((k & cbit) && (k & abit) && !(k & bbit)) {
            std::swap(amps[k], amps[k ^ abit ^ bbit]);
        }
    }
}

void pauli_apply(std::span<const cplx> in, std::span<cplx> out, std::uint64_t flip,
                 std::uint64_t phase_mask, cplx weight) {
    for (std::uint64_t k = 0; k < in.size(); ++k) {
        const std::uint64_t src = k ^ flip;
        const double sign = (std::popcount(src & phase_mask) & 1) ? -1.0 : 1.0;
        out[k] = weight * sign * in[src];
    }
}

void pauli_accumulate(std::span<const cplx> in, std::span<cplx> out, std::uint64_t flip,
                      std::uint64_t phase_mask, cplx weight) {
    for (std::uint64_t k = 0; k < in.size(); ++k) {
        const std::uint64_t src = k ^ flip;
        const double sign = (std::popcount(src & phase_mask) & 1) ? -1.0 : 1.0;
        out[k] += weight * sign * in[src];
    }
}

cplx pauli_expectation(std::span<const cplx> in, std::uint64_t flip, std::uint64_t phase_mask,
                       cplx weight) {
    cplx acc{};
    for (std::uint64_t k = 0; k < in.size(); ++k) {
        const std::uint64_t src = k ^ flip;
        const double sign = (std::popcount(src & phase_mask) & 1) ? -1.0 : 1.0;
        acc += std::conj(in[k]) * (sign * in[src]);
    }
    return weight * acc;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    cplx acc{};
    for (std::uint64_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

double norm_sq(std::span<const cplx> a) {
    double acc = 0.0;
    for (const cplx& v : a) acc += std::norm(v);
    return acc;
}

void diag_apply(std::span<const cplx> in, std::span<cplx> out, std::span<const double> diag) {
    for (std::uint64_t k = 0; k < in.size(); ++k) out[k] = diag[k] * in[k];
}

double diag_expectation(std::span<const cplx> in, std::span<const double> diag) {
    double acc = 0.0;
    for (std::uint64_t k = 0; k < in.size(); ++k) acc += diag[k] * std::norm(in[k]);
    return acc;
}

void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
    for (std::uint64_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

void scale(std::span<cplx> a, cplx s) {
    for (cplx& v : a) v *= s;
}

void project_one(std::span<cplx> amps, int qubit) {
    const std::uint64_t qbit = std::uint64_t{1} << qubit;
    for (std::uint64_t k = 0; k < amps.size(); ++k) {
        if (!(k & qbit)) amps[k] = cplx{0.0, 0.0};
    }
}

}  // namespace qspect::kernels_ref
