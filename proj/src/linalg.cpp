#include "qspect/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "qspect/errors.hpp"

namespace qspect {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = cplx{1.0, 0.0};
    return m;
}

double hermiticity_defect(const ComplexMatrix& m) {
    double worst = 0.0;
    for (int r = 0; r < m.rows; ++r) {
        for (int c = r; c < m.cols; ++c) {
            worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
        }
    }
    return worst;
}

std::vector<cplx> matvec(const ComplexMatrix& m, std::span<const cplx> x) {
    std::vector<cplx> y(static_cast<std::size_t>(m.rows));
    for (int r = 0; r < m.rows; ++r) {
        cplx acc{};
        for (int c = 0; c < m.cols; ++c) acc += m(r, c) * x[c];
        y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
}

namespace {

// Householder reduction of Hermitian t (overwritten) to real tridiagonal
// (d, e); q accumulates the similarity transform so t_input = q tri q^dagger.
void tridiagonalize(ComplexMatrix& t, ComplexMatrix& q, std::vector<double>& d,
                    std::vector<double>& e) {
    const int n = t.rows;
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    std::vector<cplx> v(n), p(n), w(n);

    for (int k = 0; k + 2 < n; ++k) {
        double xnorm_sq = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm_sq += std::norm(t(i, k));
        const double xnorm = std::sqrt(xnorm_sq);
        if (xnorm < 1e-300) {
            for (int i = k + 1; i < n; ++i) t(i, k) = t(k, i) = cplx{0.0, 0.0};
            continue;
        }
        const cplx x0 = t(k + 1, k);
        const double x0abs = std::abs(x0);
        const cplx phase = x0abs > 0.0 ? x0 / x0abs : cplx{1.0, 0.0};
        const cplx alpha = -phase * xnorm;

        // v = x - alpha e1; this choice never cancels.
        for (int i = k + 1; i < n; ++i) v[i] = t(i, k);
        v[k + 1] -= alpha;
        const double vnorm_sq = 2.0 * xnorm * (xnorm + x0abs);
        const double beta = 2.0 / vnorm_sq;

        // Hermitian rank-2 update of the trailing block:
        // p = beta B v, q_vec = p - (beta v^dagger p / 2) v, B -= v q^dagger + q v^dagger.
        for (int i = k + 1; i < n; ++i) {
            cplx acc{};
            for (int j = k + 1; j < n; ++j) acc += t(i, j) * v[j];
            p[i] = beta * acc;
        }
        cplx vp{};
        for (int i = k + 1; i < n; ++i) vp += std::conj(v[i]) * p[i];
        const cplx kk = 0.5 * beta * vp;
        for (int i = k + 1; i < n; ++i) p[i] -= kk * v[i];
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                t(i, j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
            }
        }

        t(k + 1, k) = alpha;
        t(k, k + 1) = std::conj(alpha);
        for (int i = k + 2; i < n; ++i) t(i, k) = t(k, i) = cplx{0.0, 0.0};

        // q <- q (I - beta v v^dagger)
        for (int r = 0; r < n; ++r) {
            cplx acc{};
            for (int j = k + 1; j < n; ++j) acc += q(r, j) * v[j];
            w[r] = beta * acc;
        }
        for (int r = 0; r < n; ++r) {
            for (int j = k + 1; j < n; ++j) q(r, j) -= w[r] * std::conj(v[j]);
        }
    }

    // Phase out the complex subdiagonal: with unit scalars t_i chosen below,
    // diag(t)^dagger T diag(t) has nonnegative real subdiagonal.
    cplx prev{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            const cplx sub = t(i, i - 1);
            const double mag = std::abs(sub);
            const cplx ti = mag > 0.0 ? (sub / mag) * prev : prev;
            e[i - 1] = mag;
            for (int r = 0; r < n; ++r) q(r, i) *= ti;
            prev = ti;
        }
        d[i] = t(i, i).real();
    }
}

// Implicit-shift QL iteration on a real symmetric tridiagonal (d, e) with
// eigenvector accumulation into the (complex) columns of z. e[i] couples
// d[i] and d[i+1]; e[n-1] is workspace.
void tql2(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& z) {
    const int n = static_cast<int>(d.size());
    if (n <= 1) return;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) {
                    throw NumericError("tridiagonal QL iteration failed to converge at row " +
                                       std::to_string(l));
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        const cplx fk = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * fk;
                        z(k, i) = c * z(k, i) - s * fk;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

Eigensystem eigh(const ComplexMatrix& m) {
    if (m.rows != m.cols || m.rows < 1) {
        throw ValidationError("eigh requires a square matrix");
    }
    if (m.rows > 4096) {
        throw CapacityError("eigh limited to dimension 4096, got " + std::to_string(m.rows));
    }
    const double defect = hermiticity_defect(m);
    if (defect >= 1e-10) {
        throw ValidationError("eigh input is not Hermitian (defect " + std::to_string(defect) +
                              ")");
    }

    const int n = m.rows;
    ComplexMatrix t = m;
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<double> d, e;
    tridiagonalize(t, q, d, e);
    tql2(d, e, q);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    Eigensystem out;
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.eigenvectors = ComplexMatrix(n, n);
    for (int c = 0; c < n; ++c) {
        const int src = order[static_cast<std::size_t>(c)];
        out.eigenvalues[static_cast<std::size_t>(c)] = d[src];
        int imax = 0;
        double vmax = -1.0;
        for (int r = 0; r < n; ++r) {
            const double mag = std::abs(q(r, src));
            if (mag > vmax) {
                vmax = mag;
                imax = r;
            }
        }
        const cplx top = q(imax, src);
        const cplx fix = vmax > 0.0 ? std::conj(top) / vmax : cplx{1.0, 0.0};
        for (int r = 0; r < n; ++r) out.eigenvectors(r, c) = q(r, src) * fix;
    }
    return out;
}

std::vector<DegenerateLevel> group_degeneracies(std::span<const double> eigenvalues, double tol) {
    std::vector<DegenerateLevel> groups;
    double sum = 0.0;
    int count = 0;
    for (const double ev : eigenvalues) {
        if (count > 0 && std::abs(ev - sum / count) <= tol) {
            sum += ev;
            ++count;
        } else {
            if (count > 0) groups.push_back({sum / count, count});
            sum = ev;
            count = 1;
        }
    }
    if (count > 0) groups.push_back({sum / count, count});
    return groups;
}

std::vector<double> solve_spd(RealMatrix m, std::vector<double> b) {
    const int n = m.rows;
    if (m.cols != n || static_cast<int>(b.size()) != n) {
        throw ValidationError("solve_spd requires a square system");
    }
    // In-place Cholesky m = L L^T (lower triangle).
    for (int j = 0; j < n; ++j) {
        double diag = m(j, j);
        for (int k = 0; k < j; ++k) diag -= m(j, k) * m(j, k);
        if (!(diag > 0.0)) {
            throw NumericError("matrix is not positive definite (pivot " + std::to_string(j) +
                               ")");
        }
        const double ljj = std::sqrt(diag);
        m(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= m(i, k) * m(j, k);
            m(i, j) = s / ljj;
        }
    }
    // Forward then back substitution.
    for (int i = 0; i < n; ++i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= m(i, k) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / m(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= m(k, i) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / m(i, i);
    }
    return b;
}

}  // namespace qspect
