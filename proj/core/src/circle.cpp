#include "fsph/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fsph/dispersion.hpp"
#include "fsph/eigen.hpp"
#include "fsph/roots.hpp"

namespace fsph {

namespace {

constexpr double kPi = 3.14159265358979323846;

void canonical_phase(StateVector& v) {
    std::size_t imax = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const double m = std::abs(v.amp[i]);
        if (m > best) {
            best = m;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    const cplx phase = v.amp[imax] / best;
    for (auto& a : v.amp) a /= phase;
}

// Eigenvector of a complex symmetric tridiagonal matrix (diagonal d,
// off-diagonal e, all e_i != 0) for a given eigenvalue z, by forward
// substitution of the defining recurrence from chi_0 = 1. Returns the
// normalized vector; the quality is judged afterwards by ||(A - z)chi||.
double vector_residual(const ComplexMatrix& a, cplx z, const StateVector& v) {
    StateVector w = apply(a, v);
    for (std::size_t i = 0; i < w.dim(); ++i) w.amp[i] -= z * v.amp[i];
    return w.norm();
}

// Solve (T − z)w = rhs for the symmetric tridiagonal T = (d, e) with partial
// pivoting (fill-in bounded by a second superdiagonal). Exactly singular
// pivots are replaced by a tiny value — the standard inverse-iteration move
// that steers the solution into the null direction.
StateVector tridiag_solve_shifted(const std::vector<cplx>& d,
                                  const std::vector<cplx>& e, cplx z,
                                  const StateVector& rhs) {
    const std::size_t n = d.size();
    std::vector<cplx> A0(n), A1(n, 0.0), A2(n, 0.0), b(rhs.amp);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        A0[i] = d[i] - z;
        if (i + 1 < n) A1[i] = e[i];
        scale = std::max({scale, std::abs(A0[i]), std::abs(A1[i])});
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cplx r0 = A0[i], r1 = A1[i], r2 = A2[i], rb = b[i];
        cplx s0 = e[i], s1 = A0[i + 1], s2 = A1[i + 1], sb = b[i + 1];
        if (std::abs(s0) > std::abs(r0)) {
            std::swap(r0, s0);
            std::swap(r1, s1);
            std::swap(r2, s2);
            std::swap(rb, sb);
        }
        if (std::abs(r0) == 0.0) r0 = 1e-30 * scale;
        const cplx f = s0 / r0;
        A0[i] = r0;
        A1[i] = r1;
        A2[i] = r2;
        b[i] = rb;
        A0[i + 1] = s1 - f * r1;
        A1[i + 1] = s2 - f * r2;
        A2[i + 1] = 0.0;
        b[i + 1] = sb - f * rb;
    }
    StateVector w(n);
    for (std::size_t q = n; q-- > 0;) {
        cplx acc = b[q];
        if (q + 1 < n) acc -= A1[q] * w.amp[q + 1];
        if (q + 2 < n) acc -= A2[q] * w.amp[q + 2];
        cplx piv = A0[q];
        if (std::abs(piv) == 0.0) piv = 1e-30 * scale;
        w.amp[q] = acc / piv;
    }
    return w;
}

StateVector tridiag_eigenvector(const std::vector<cplx>& d,
                                const std::vector<cplx>& e, cplx z) {
    const std::size_t n = d.size();

    // Candidate 1: three-term forward substitution. Exact for the given z up
    // to the last row, which makes it the best choice near defective points,
    // but the repeated division by e_i amplifies the growing solution when
    // |e| ≪ |d − z| (small coupling), so it cannot be used alone.
    StateVector fwd(n);
    fwd.amp[0] = 1.0;
    if (n > 1) fwd.amp[1] = -(d[0] - z) / e[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        fwd.amp[i + 1] =
            -((d[i] - z) * fwd.amp[i] + e[i - 1] * fwd.amp[i - 1]) / e[i];
    const double fwd_norm = fwd.norm();
    const bool fwd_ok = std::isfinite(fwd_norm) && fwd_norm > 0.0;
    if (fwd_ok)
        for (std::size_t i = 0; i < n; ++i) fwd.amp[i] /= fwd_norm;

    // Candidate 2: fixed-shift inverse iteration, seeded by candidate 1 when
    // finite (otherwise by the basis vector nearest the shift). Each solve
    // shrinks contamination by ~(shift error)/(spectral gap).
    StateVector inv(n);
    if (fwd_ok) {
        inv = fwd;
    } else {
        std::size_t j0 = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (std::abs(d[j] - z) < std::abs(d[j0] - z)) j0 = j;
        inv.amp[j0] = 1.0;
    }
    for (int sweep = 0; sweep < 3; ++sweep) {
        StateVector next = tridiag_solve_shifted(d, e, z, inv);
        // Overflow-safe renormalization: an exactly singular shift can blow
        // the solution up to ~1e30·n, whose squared norm would overflow if
        // summed directly. Pre-scale by the max entry first.
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mx = std::max(mx, std::abs(next.amp[i]));
        if (!std::isfinite(mx) || mx == 0.0) break;  // keep previous iterate
        for (std::size_t i = 0; i < n; ++i) next.amp[i] /= mx;
        const double norm = next.norm();
        if (norm == 0.0) break;
        for (std::size_t i = 0; i < n; ++i) next.amp[i] /= norm;
        inv = next;
    }

    const auto residual = [&](const StateVector& v) {
        StateVector r(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = (d[i] - z) * v.amp[i];
            if (i > 0) acc += e[i - 1] * v.amp[i - 1];
            if (i + 1 < n) acc += e[i] * v.amp[i + 1];
            r.amp[i] = acc;
        }
        return r.norm();
    };

    const double inf = std::numeric_limits<double>::infinity();
    double rf = fwd_ok ? residual(fwd) : inf;
    double ri = residual(inv);
    if (!std::isfinite(rf)) rf = inf;
    if (!std::isfinite(ri)) ri = inf;
    StateVector chi = (fwd_ok && rf <= ri) ? fwd : inv;
    canonical_phase(chi);
    return chi;
}

}  // namespace

double FuzzyCircleSpace::b(int n) const {
    if (n < 1 - Lambda || n > Lambda) return 0.0;
    const double x = static_cast<double>(n);
    return std::sqrt(1.0 + x * (x - 1.0) / k);
}

ComplexMatrix FuzzyCircleSpace::proj(int n) const {
    ComplexMatrix p(dim, dim);
    p(idx(n), idx(n)) = 1.0;
    return p;
}

double circle_min_stiffness(int Lambda) {
    const double l = static_cast<double>(Lambda);
    return l * l * (l + 1.0) * (l + 1.0);
}

FuzzyCircleSpace build_circle(int Lambda, double k) {
    if (Lambda < 1) throw std::invalid_argument("cutoff Lambda must be >= 1");
    const double kmin = circle_min_stiffness(Lambda);
    if (k < kmin * (1.0 - 1e-12))
        throw std::invalid_argument("stiffness k below Lambda^2 (Lambda+1)^2");

    FuzzyCircleSpace s;
    s.Lambda = Lambda;
    s.k = k;
    s.dim = 2 * static_cast<std::size_t>(Lambda) + 1;

    s.L = ComplexMatrix(s.dim, s.dim);
    for (int n = -Lambda; n <= Lambda; ++n)
        s.L(s.idx(n), s.idx(n)) = static_cast<double>(n);

    s.xp = ComplexMatrix(s.dim, s.dim);
    for (int n = -Lambda; n < Lambda; ++n)
        s.xp(s.idx(n + 1), s.idx(n)) = s.b(n + 1);
    s.xm = s.xp.adjoint();

    s.x1 = s.xp + s.xm;
    s.x1 *= cplx(0.5, 0.0);
    s.x2 = s.xp - s.xm;
    s.x2 *= cplx(0.0, -0.5);  // 1/(2i)

    s.x_sq = s.x1 * s.x1;
    s.x_sq += s.x2 * s.x2;
    return s;
}

ComplexMatrix circle_L_prime(const FuzzyCircleSpace& s) {
    const double c = 1.0 + s.Lambda * (s.Lambda + 1.0) / s.k;
    ComplexMatrix lp(s.dim, s.dim);
    for (int n = -s.Lambda; n <= s.Lambda; ++n)
        lp(s.idx(n), s.idx(n)) = -static_cast<double>(n) / s.k;
    lp(s.idx(s.Lambda), s.idx(s.Lambda)) += 0.5 * c;
    lp(s.idx(-s.Lambda), s.idx(-s.Lambda)) -= 0.5 * c;
    return lp;
}

CircleAlgebraReport verify_circle_algebra(const FuzzyCircleSpace& s) {
    CircleAlgebraReport r;
    const std::size_t n = s.dim;
    const double c = 1.0 + s.Lambda * (s.Lambda + 1.0) / s.k;

    r.hermiticity = std::max({hermiticity_defect(s.L), hermiticity_defect(s.x1),
                              hermiticity_defect(s.x2),
                              max_abs_diff(s.xp.adjoint(), s.xm)});

    r.ladder_comm = std::max(max_abs_diff(commutator(s.L, s.xp), s.xp),
                             max_abs_diff(commutator(s.L, s.xm),
                                          cplx(-1.0) * s.xm));

    ComplexMatrix exchange = cplx(-2.0 / s.k) * s.L;
    exchange += c * (s.proj(s.Lambda) - s.proj(-s.Lambda));
    r.ladder_exchange = max_abs_diff(commutator(s.xp, s.xm), exchange);

    ComplexMatrix xsq_closed = ComplexMatrix::identity(n);
    xsq_closed += cplx(1.0 / s.k) * (s.L * s.L);
    xsq_closed -= cplx(0.5 * c) * (s.proj(s.Lambda) + s.proj(-s.Lambda));
    r.x_sq_closed_form = max_abs_diff(s.x_sq, xsq_closed);

    r.cartesian_comm =
        max_abs_diff(commutator(s.x1, s.x2), cplx(0.0, 1.0) * circle_L_prime(s));

    ComplexMatrix minpoly = ComplexMatrix::identity(n);
    for (int m = -s.Lambda; m <= s.Lambda; ++m) {
        ComplexMatrix factor = s.L;
        factor -= cplx(static_cast<double>(m)) * ComplexMatrix::identity(n);
        minpoly = minpoly * factor;
    }
    r.min_poly_L = minpoly.max_abs();

    ComplexMatrix pp = ComplexMatrix::identity(n);
    ComplexMatrix pm = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        pp = pp * s.xp;
        pm = pm * s.xm;
    }
    r.nilpotency = std::max(pp.max_abs(), pm.max_abs());

    r.max_residual =
        std::max({r.hermiticity, r.ladder_comm, r.ladder_exchange,
                  r.x_sq_closed_form, r.cartesian_comm, r.min_poly_L,
                  r.nilpotency});
    return r;
}

double circle_su2_check(const FuzzyCircleSpace& s) {
    const double ll1 = s.Lambda * (s.Lambda + 1.0);
    double worst = 0.0;
    for (int n = -s.Lambda; n < s.Lambda; ++n) {
        const double sv = n + 1.0;
        const double fplus =
            std::sqrt((1.0 + sv * (sv - 1.0) / s.k) / (ll1 - sv * (sv - 1.0)));
        const double eplus =
            std::sqrt((s.Lambda - static_cast<double>(n)) *
                      (s.Lambda + static_cast<double>(n) + 1.0));
        worst = std::max(worst, std::abs(fplus * eplus - s.b(n + 1)));
    }
    return worst;
}

StateVector circle_scs_omega(const FuzzyCircleSpace& s, double alpha,
                             const std::vector<double>& betas) {
    if (betas.size() != s.dim)
        throw std::invalid_argument("phase vector must have dimension 2*Lambda+1");
    StateVector v(s.dim);
    const double amp = 1.0 / std::sqrt(static_cast<double>(s.dim));
    for (int m = -s.Lambda; m <= s.Lambda; ++m) {
        const double ang = alpha * m + betas[s.idx(m)];
        v.amp[s.idx(m)] = amp * cplx(std::cos(ang), std::sin(ang));
    }
    return v;
}

CircleSCSReport circle_scs_audit(const FuzzyCircleSpace& s, double alpha,
                                 const std::vector<double>& betas) {
    CircleSCSReport r;
    r.state = circle_scs_omega(s, alpha, betas);

    r.mean_L = expectation(s.L, r.state).real();
    r.var_L = expectation_sq_hermitian(s.L, r.state) - r.mean_L * r.mean_L;
    r.var_L_closed = s.Lambda * (s.Lambda + 1.0) / 3.0;

    r.mean_xp = expectation(s.xp, r.state);
    cplx sum = 0.0;
    for (int m = 1 - s.Lambda; m <= s.Lambda; ++m) {
        const double dphase = betas[s.idx(m - 1)] - betas[s.idx(m)];
        sum += cplx(std::cos(dphase), std::sin(dphase)) * s.b(m);
    }
    r.mean_xp_closed = cplx(std::cos(alpha), -std::sin(alpha)) * sum /
                       static_cast<double>(s.dim);

    const double mean_x_sq = expectation(s.x_sq, r.state).real();
    r.disp_x = mean_x_sq - std::norm(r.mean_xp);
    r.disp_x_bound = (0.5 + 1.0 / (3.0 * s.Lambda)) / (s.Lambda + 1.0);

    r.closed_form_defect =
        std::max({std::abs(r.mean_L), std::abs(r.var_L - r.var_L_closed),
                  std::abs(r.mean_xp - r.mean_xp_closed)});
    return r;
}

ResolutionReport circle_resolution_check(const FuzzyCircleSpace& s,
                                         std::size_t M, const StateVector& omega,
                                         double tol) {
    if (M == 0) throw std::invalid_argument("need at least one sample phase");
    if (omega.dim() != s.dim)
        throw std::invalid_argument("state dimension mismatch");
    StateVector base = omega;
    base.normalize();

    ComplexMatrix B(s.dim, s.dim);
    for (std::size_t j = 0; j < M; ++j) {
        const double aj = 2.0 * kPi * static_cast<double>(j) / M;
        StateVector w(s.dim);
        for (int m = -s.Lambda; m <= s.Lambda; ++m)
            w.amp[s.idx(m)] =
                cplx(std::cos(aj * m), std::sin(aj * m)) * base.amp[s.idx(m)];
        for (std::size_t p = 0; p < s.dim; ++p)
            for (std::size_t q = 0; q < s.dim; ++q)
                B(p, q) += w.amp[p] * std::conj(w.amp[q]);
    }
    B *= cplx(static_cast<double>(s.dim) / static_cast<double>(M));

    ResolutionReport rep;
    rep.max_identity_residual = max_abs_diff(B, ComplexMatrix::identity(s.dim));
    rep.diagonal_profile.resize(s.dim);
    for (std::size_t i = 0; i < s.dim; ++i)
        rep.diagonal_profile[i] = B(i, i).real();
    rep.exact = rep.max_identity_residual < tol;
    return rep;
}

CircleURAudit circle_ur_audit(const FuzzyCircleSpace& s, const StateVector& v) {
    StateVector u = v;
    u.normalize();
    CircleURAudit r;

    const DispersionReport d =
        dispersion_report({s.x1, s.x2}, {s.L}, u);
    r.var_L = d.var_L[0];
    r.var_x1 = d.var_x[0];
    r.var_x2 = d.var_x[1];
    r.disp_x = d.disp_x;
    r.mean_x1 = d.mean_x[0];
    r.mean_x2 = d.mean_x[1];

    r.heis_x1_slack = r.var_L * r.var_x1 - 0.25 * r.mean_x2 * r.mean_x2;
    r.heis_x2_slack = r.var_L * r.var_x2 - 0.25 * r.mean_x1 * r.mean_x1;
    r.heis_total_slack =
        r.var_L * r.disp_x -
        0.25 * (r.mean_x1 * r.mean_x1 + r.mean_x2 * r.mean_x2);

    r.mean_L_prime = expectation(circle_L_prime(s), u).real();
    double closed = 0.0;
    for (int m = 1; m < s.Lambda; ++m)
        closed += (std::norm(u.amp[s.idx(-m)]) - std::norm(u.amp[s.idx(m)])) *
                  static_cast<double>(m) / s.k;
    closed += (std::norm(u.amp[s.idx(s.Lambda)]) -
               std::norm(u.amp[s.idx(-s.Lambda)])) *
              (0.5 + s.Lambda * (s.Lambda - 1.0) / (2.0 * s.k));
    r.mean_L_prime_closed = closed;

    r.anticomm_x1x2 = expectation(anticommutator(s.x1, s.x2), u).real();
    const double cov = r.anticomm_x1x2 - 2.0 * r.mean_x1 * r.mean_x2;
    r.robertson_slack =
        4.0 * r.var_x1 * r.var_x2 -
        (r.mean_L_prime * r.mean_L_prime + cov * cov);
    const double m2_x1 = r.var_x1 + r.mean_x1 * r.mean_x1;
    const double m2_x2 = r.var_x2 + r.mean_x2 * r.mean_x2;
    r.second_moment_slack =
        4.0 * m2_x1 * m2_x2 -
        (r.mean_L_prime * r.mean_L_prime + r.anticomm_x1x2 * r.anticomm_x1x2);

    r.min_slack = std::min({r.heis_x1_slack, r.heis_x2_slack,
                            r.heis_total_slack, r.robertson_slack,
                            r.second_moment_slack});
    return r;
}

CircleMinimizerReport circle_lambda1_minimizer(double k) {
    const FuzzyCircleSpace s = build_circle(1, k);
    CircleMinimizerReport r;

    r.minimizer = StateVector(3);
    const double edge = std::sqrt(5.0) / 4.0;
    r.minimizer.amp[0] = edge;
    r.minimizer.amp[1] = std::sqrt(3.0 / 8.0);
    r.minimizer.amp[2] = edge;

    const double m1 = expectation(s.x1, r.minimizer).real();
    const double m2 = expectation(s.x2, r.minimizer).real();
    r.mean_x_sq = expectation(s.x_sq, r.minimizer).real();
    r.disp_min = r.mean_x_sq - m1 * m1 - m2 * m2;

    // (Dx)^2(s,t,cos a) = (1-s)/2 + s^2 - 2 s t cos a over the reduced
    // parameter region s in [0,1], 0 <= t <= (1-s)/2, |cos a| <= 1.
    double grid_min = 1e300;
    for (int is = 0; is <= 200; ++is) {
        const double sv = is / 200.0;
        const double base = 0.5 * (1.0 - sv) + sv * sv;
        const double tmax = 0.5 * (1.0 - sv);
        for (int iu = 0; iu <= 100; ++iu) {
            const double t = tmax * iu / 100.0;
            for (int ic = 0; ic <= 40; ++ic) {
                const double ca = -1.0 + ic * (2.0 / 40.0);
                grid_min = std::min(grid_min, base - 2.0 * sv * t * ca);
            }
        }
    }
    r.grid_min = grid_min;

    r.chi_plus = StateVector(3);
    r.chi_plus.amp[0] = 0.5;
    r.chi_plus.amp[1] = std::sqrt(2.0) / 2.0;
    r.chi_plus.amp[2] = 0.5;
    const double p1 = expectation(s.x1, r.chi_plus).real();
    const double p2 = expectation(s.x2, r.chi_plus).real();
    r.mean_x_sq_chi_plus = expectation(s.x_sq, r.chi_plus).real();
    r.disp_chi_plus = r.mean_x_sq_chi_plus - p1 * p1 - p2 * p2;
    r.mean_xp_chi_plus = expectation(s.xp, r.chi_plus);
    return r;
}

CircleX1Analysis circle_x1_analysis(const FuzzyCircleSpace& s) {
    CircleX1Analysis r;

    std::vector<double> diag(s.dim, 0.0), off(s.dim - 1);
    for (std::size_t i = 0; i + 1 < s.dim; ++i)
        off[i] = 0.5 * s.b(static_cast<int>(i) + 1 - s.Lambda);
    const EigenResult ed = sym_tridiag_eigen(diag, off);

    r.spectrum.values.assign(ed.values.begin(), ed.values.end());
    r.spectrum.vectors = ed.vectors;
    const double scale = std::max(1.0, std::abs(ed.values.back()));
    double resid = 0.0;
    for (std::size_t j = 0; j < s.dim; ++j) {
        StateVector col(s.dim);
        for (std::size_t i = 0; i < s.dim; ++i) col.amp[i] = ed.vectors(i, j);
        resid = std::max(resid, vector_residual(s.x1, ed.values[j], col));
    }
    r.spectrum.max_residual = resid;

    bool symmetric = true;
    for (std::size_t i = 0; i < s.dim; ++i)
        symmetric = symmetric &&
                    std::abs(ed.values[i] + ed.values[s.dim - 1 - i]) <
                        1e-10 * scale;
    r.spectrum.symmetric_spectrum = symmetric;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < s.dim; ++i)
        simple = simple && (ed.values[i + 1] - ed.values[i] > 1e-10 * scale);
    r.spectrum.simple = simple;

    r.top_eigenvalue = ed.values.back();

    r.cosine_vector = StateVector(s.dim);
    for (int m = -s.Lambda; m <= s.Lambda; ++m)
        r.cosine_vector.amp[s.idx(m)] =
            std::cos(m * kPi / (2.0 * s.Lambda + 2.0));
    r.cosine_vector.normalize();

    r.mean_x1_cosine = expectation(s.x1, r.cosine_vector).real();
    r.mean_x1_lower_bound = std::cos(kPi / (2.0 * s.Lambda + 2.0));
    r.mean_x_sq_cosine = expectation(s.x_sq, r.cosine_vector).real();
    const double lp1 = s.Lambda + 1.0;
    r.mean_x_sq_upper_bound = 1.0 + 1.0 / (lp1 * lp1);
    const double m2 = expectation(s.x2, r.cosine_vector).real();
    r.disp_cosine = r.mean_x_sq_cosine -
                    r.mean_x1_cosine * r.mean_x1_cosine - m2 * m2;
    r.disp_upper_bound = (1.0 + kPi * kPi / 4.0) / (lp1 * lp1);
    return r;
}

bool spectra_interlace(const std::vector<double>& outer,
                       const std::vector<double>& inner, double tol) {
    if (outer.size() <= inner.size()) return false;
    const std::size_t gap = outer.size() - inner.size();
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (inner[i] < outer[i] - tol) return false;
        if (inner[i] > outer[i + gap] + tol) return false;
    }
    return true;
}

AMuEigenReport circle_a_mu_eigen(const FuzzyCircleSpace& s, double mu) {
    AMuEigenReport rep;
    const std::size_t n = s.dim;
    ComplexMatrix a = s.L;
    a -= cplx(0.0, mu) * s.x1;

    if (mu == 0.0) {
        for (int m = s.Lambda; m >= -s.Lambda; --m) {
            rep.eigenvalues.push_back(cplx(static_cast<double>(m), 0.0));
            StateVector v(n);
            v.amp[s.idx(m)] = 1.0;
            rep.eigenvectors.push_back(v);
        }
    } else {
        std::vector<cplx> d(n);
        std::vector<cplx> e(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = cplx(static_cast<double>(static_cast<int>(i) - s.Lambda), 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i)
            e[i] = cplx(0.0, -0.5 * mu * s.b(static_cast<int>(i) + 1 - s.Lambda));

        // det(A - z) by the three-term recurrence on polynomial coefficients.
        std::vector<cplx> prev{cplx(1.0)};
        std::vector<cplx> curr{d[0], cplx(-1.0)};
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<cplx> next(curr.size() + 1, cplx(0.0));
            for (std::size_t j = 0; j < curr.size(); ++j) {
                next[j] += d[i] * curr[j];
                next[j + 1] -= curr[j];
            }
            const cplx esq = e[i - 1] * e[i - 1];
            for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= esq * prev[j];
            prev = std::move(curr);
            curr = std::move(next);
        }

        rep.eigenvalues = poly_roots(curr);
        for (const cplx& z : rep.eigenvalues)
            rep.eigenvectors.push_back(tridiag_eigenvector(d, e, z));
    }

    rep.defective.assign(n, false);
    double zscale = 1.0;
    for (const cplx& z : rep.eigenvalues) zscale = std::max(zscale, std::abs(z));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(rep.eigenvalues[i] - rep.eigenvalues[j]) <
                1e-6 * zscale) {
                rep.defective[i] = true;
                rep.defective[j] = true;
            }

    for (std::size_t i = 0; i < n; ++i)
        rep.max_residual =
            std::max(rep.max_residual,
                     vector_residual(a, rep.eigenvalues[i], rep.eigenvectors[i]));

    // Spectrum symmetry: chi'_m = (-1)^m chi_{-m} maps the z eigenvector to a
    // -z eigenvector. Measure both the eigenvalue match and, up to a scalar,
    // the eigenvector match.
    for (std::size_t i = 0; i < n; ++i) {
        StateVector t(n);
        for (std::size_t p = 0; p < n; ++p) {
            const int m = static_cast<int>(p) - s.Lambda;
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            t.amp[p] = sign * rep.eigenvectors[i].amp[s.idx(-m)];
        }
        std::size_t jbest = 0;
        double dbest = 1e300;
        for (std::size_t j = 0; j < n; ++j) {
            const double dz = std::abs(rep.eigenvalues[j] + rep.eigenvalues[i]);
            if (dz < dbest) {
                dbest = dz;
                jbest = j;
            }
        }
        // Alignment measured as the projection residual ‖t − <v,t>v‖, which
        // is forward-stable; the algebraically equal √(1−|<v,t>|²) bottoms
        // out at √ε ≈ 1.5e−8 for perfectly aligned unit vectors.
        const cplx c = inner(rep.eigenvectors[jbest], t);
        double resid_sq = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            resid_sq += std::norm(t.amp[p] - c * rep.eigenvectors[jbest].amp[p]);
        const double vec_defect = std::sqrt(resid_sq);
        rep.pairing_defect =
            std::max({rep.pairing_defect, dbest, vec_defect});
    }
    return rep;
}

std::vector<AMuBranch> circle_a_mu_lambda1_branches(const FuzzyCircleSpace& s,
                                                    double mu) {
    if (s.Lambda != 1)
        throw std::invalid_argument("branch formulas require Lambda = 1");
    ComplexMatrix a = s.L;
    a -= cplx(0.0, mu) * s.x1;

    const cplx root = std::sqrt(cplx(1.0 - 0.5 * mu * mu, 0.0));
    const std::vector<cplx> zs{root, cplx(0.0), -root};

    std::vector<AMuBranch> out;
    for (const cplx& z : zs) {
        AMuBranch br;
        br.z = z;
        if (mu == 0.0) {
            br.state = StateVector(3);
            br.state.amp[s.idx(static_cast<int>(std::lround(z.real())))] = 1.0;
        } else {
            const std::vector<cplx> d{cplx(-1.0), cplx(0.0), cplx(1.0)};
            const std::vector<cplx> e{cplx(0.0, -0.5 * mu),
                                      cplx(0.0, -0.5 * mu)};
            br.state = tridiag_eigenvector(d, e, z);
        }
        const DispersionReport rep =
            dispersion_report({s.x1, s.x2}, {s.L}, br.state);
        br.mean_x_norm_sq =
            rep.mean_x[0] * rep.mean_x[0] + rep.mean_x[1] * rep.mean_x[1];
        br.mean_x_sq = rep.mean_x_sq;
        br.disp_x = rep.disp_x;
        br.var_L = rep.var_L[0];
        br.residual = vector_residual(a, z, br.state);
        out.push_back(std::move(br));
    }
    return out;
}

}  // namespace fsph
