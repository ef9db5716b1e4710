#include "fsph/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fsph {

namespace {

// Phase-fix every column: entry of largest modulus made real positive.
void canonicalize_columns(ComplexMatrix& v) {
    const std::size_t n = v.rows(), m = v.cols();
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::abs(v(i, j));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (best <= 0.0) continue;
        const cplx phase = v(imax, j) / best;
        for (std::size_t i = 0; i < n; ++i) v(i, j) /= phase;
    }
}

void sort_ascending(EigenResult& r) {
    const std::size_t n = r.values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return r.values[a] < r.values[b]; });
    std::vector<double> vals(n);
    ComplexMatrix vecs(r.vectors.rows(), n);
    for (std::size_t j = 0; j < n; ++j) {
        vals[j] = r.values[order[j]];
        for (std::size_t i = 0; i < r.vectors.rows(); ++i)
            vecs(i, j) = r.vectors(i, order[j]);
    }
    r.values = std::move(vals);
    r.vectors = std::move(vecs);
}

}  // namespace

EigenResult hermitian_eigen(const ComplexMatrix& a_in, double tol) {
    const std::size_t n = a_in.rows();
    if (n != a_in.cols()) throw std::invalid_argument("hermitian_eigen: square matrix required");
    const double scale = std::max(1e-300, a_in.max_abs());
    if (hermiticity_defect(a_in) > 1e-12 * scale)
        throw std::invalid_argument("hermitian_eigen: input is not Hermitian");

    ComplexMatrix a = a_in;
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
        return std::sqrt(2.0 * s);
    };

    const double stop = tol * scale * static_cast<double>(n);
    for (int sweep = 0; sweep < 60; ++sweep) {
        if (off_norm() <= stop) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx gamma = a(p, q);
                const double ag = std::abs(gamma);
                if (ag <= tol * scale * 1e-2) continue;
                const double alpha = a(p, p).real();
                const double beta = a(q, q).real();
                const cplx phase = gamma / ag;  // e^{iφ}

                const double tau = (beta - alpha) / (2.0 * ag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // A ← J†AJ with J_pp=c, J_pq=s·e^{iφ}, J_qp=−s·e^{−iφ}, J_qq=c.
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const cplx arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp - s * std::conj(phase) * arq;
                    a(r, q) = s * phase * arp + c * arq;
                    a(p, r) = std::conj(a(r, p));
                    a(q, r) = std::conj(a(r, q));
                }
                a(p, p) = cplx(c * c * alpha + s * s * beta - 2.0 * c * s * ag, 0.0);
                a(q, q) = cplx(s * s * alpha + c * c * beta + 2.0 * c * s * ag, 0.0);
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t r = 0; r < n; ++r) {
                    const cplx vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp - s * std::conj(phase) * vrq;
                    v(r, q) = s * phase * vrp + c * vrq;
                }
            }
        }
    }
    if (off_norm() > stop * 10.0)
        throw std::runtime_error("hermitian_eigen: Jacobi sweeps failed to converge");

    EigenResult res;
    res.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.values[i] = a(i, i).real();
    res.vectors = std::move(v);
    sort_ascending(res);
    canonicalize_columns(res.vectors);
    return res;
}

EigenResult sym_tridiag_eigen(const std::vector<double>& diag,
                              const std::vector<double>& offdiag) {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("sym_tridiag_eigen: empty matrix");
    if (offdiag.size() + 1 != n)
        throw std::invalid_argument("sym_tridiag_eigen: offdiag must have size n-1");

    std::vector<double> d = diag;
    std::vector<double> e(n, 0.0);  // e[i] couples i and i+1; e[n-1] sentinel
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = offdiag[i];

    std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("sym_tridiag_eigen: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (std::size_t i = m; i-- > l;) {
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
                    for (std::size_t row = 0; row < n; ++row) {
                        f = z[row][i + 1];
                        z[row][i + 1] = s * z[row][i] + c * f;
                        z[row][i] = c * z[row][i] - s * f;
                    }
                }
                if (r == 0.0 && m - l > 1) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    EigenResult res;
    res.values = std::move(d);
    res.vectors = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) res.vectors(i, j) = z[i][j];
    sort_ascending(res);
    canonicalize_columns(res.vectors);
    return res;
}

}  // namespace fsph
