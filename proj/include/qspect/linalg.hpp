#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qspect/kernels.hpp"

namespace qspect {

/// Dense real matrix, row-major.
struct RealMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    RealMatrix() = default;
    RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

/// Dense complex matrix, row-major.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const cplx& operator()(int r, int c) const {
        return a[static_cast<std::size_t>(r) * cols + c];
    }

    static ComplexMatrix identity(int n);
};

/// max |A(i,j) - conj(A(j,i))| over a square matrix.
double hermiticity_defect(const ComplexMatrix& m);

/// y = A x.
std::vector<cplx> matvec(const ComplexMatrix& m, std::span<const cplx> x);

struct Eigensystem {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

/// Full eigendecomposition of a Hermitian matrix: Householder reduction to
/// real tridiagonal form followed by implicit-shift QL iteration. Eigenvalues
/// come back ascending; each eigenvector is phased so its largest-magnitude
/// component is real positive. Throws ValidationError if the input is not
/// Hermitian to 1e-10, CapacityError above dim 4096, NumericError if the QL
/// iteration fails to converge.
Eigensystem eigh(const ComplexMatrix& m);

struct DegenerateLevel {
    double energy;
    int count;
};

/// Greedy left-to-right clustering of an ascending eigenvalue list: a value
/// joins the current group while it stays within tol of the group's running
/// mean. Reported energy is the group mean.
std::vector<DegenerateLevel> group_degeneracies(std::span<const double> eigenvalues,
                                                double tol = 5e-3);

/// Solves A x = b for symmetric positive definite A via Cholesky. Throws
/// NumericError if A is not positive definite.
std::vector<double> solve_spd(RealMatrix m, std::vector<double> b);

}  // namespace qspect
