#include "fsph/sphere.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsph/dispersion.hpp"
#include "fsph/eigen.hpp"
#include "fsph/quadrature.hpp"
#include "fsph/specfun.hpp"

namespace fsph {

namespace {

constexpr double kPi = 3.14159265358979323846;

int eps3(int i, int j, int h) {
    if (i == j || j == h || i == h) return 0;
    return ((i + 1) % 3 == j) ? 1 : -1;
}

int eps4(int a, int b, int c, int d) {
    int p[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (p[i] == p[j]) return 0;
            if (p[i] > p[j]) sign = -sign;
        }
    return sign;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

StateVector matvec(const ComplexMatrix& m, const StateVector& v) {
    return StateVector(m.apply(v.amp));
}

void rank_one_accumulate(ComplexMatrix& b, const StateVector& w, double wt) {
    const std::size_t n = w.dim();
    for (std::size_t p = 0; p < n; ++p) {
        const cplx wp = wt * w.amp[p];
        for (std::size_t q = 0; q < n; ++q)
            b(p, q) += wp * std::conj(w.amp[q]);
    }
}

ResolutionReport finish_resolution(const ComplexMatrix& b, double tol) {
    ResolutionReport rep;
    rep.max_identity_residual = max_abs_diff(b, ComplexMatrix::identity(b.rows()));
    rep.diagonal_profile.resize(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i)
        rep.diagonal_profile[i] = b(i, i).real();
    rep.exact = rep.max_identity_residual < tol;
    return rep;
}

}  // namespace

double FuzzySphereSpace::c(int l) const {
    if (l < 1 || l > Lambda) return 0.0;
    const double ld = static_cast<double>(l);
    return std::sqrt(1.0 + ld * ld / k);
}

double FuzzySphereSpace::clebsch_A(int l, int a, int m) {
    if (l < 1) return 0.0;
    const double den = (2.0 * l - 1.0) * (2.0 * l + 1.0);
    if (a == 0)
        return std::sqrt(static_cast<double>(l + m) * (l - m) / den);
    if (a == 1)
        return std::sqrt(static_cast<double>(l - m) * (l - m - 1) / den);
    return -std::sqrt(static_cast<double>(l + m) * (l + m - 1) / den);
}

double FuzzySphereSpace::clebsch_B(int l, int a, int m) {
    return clebsch_A(l + 1, -a, m + a);
}

double sphere_min_stiffness(int Lambda) {
    const double l = static_cast<double>(Lambda);
    return l * l * (l + 1.0) * (l + 1.0);
}

FuzzySphereSpace build_sphere(int Lambda, double k) {
    if (Lambda < 1) throw std::invalid_argument("cutoff Lambda must be >= 1");
    if (k < sphere_min_stiffness(Lambda) * (1.0 - 1e-12))
        throw std::invalid_argument("stiffness k below Lambda^2 (Lambda+1)^2");

    FuzzySphereSpace s;
    s.Lambda = Lambda;
    s.k = k;
    s.dim = static_cast<std::size_t>(Lambda + 1) * (Lambda + 1);
    s.K = 1.0 / k + (1.0 + static_cast<double>(Lambda) * Lambda / k) /
                        (2.0 * Lambda + 1.0);

    s.L3 = ComplexMatrix(s.dim, s.dim);
    s.Lp = ComplexMatrix(s.dim, s.dim);
    s.L_sq = ComplexMatrix(s.dim, s.dim);
    for (int l = 0; l <= Lambda; ++l)
        for (int m = -l; m <= l; ++m) {
            s.L3(s.idx(l, m), s.idx(l, m)) = static_cast<double>(m);
            s.L_sq(s.idx(l, m), s.idx(l, m)) = static_cast<double>(l) * (l + 1);
            if (m < l)
                s.Lp(s.idx(l, m + 1), s.idx(l, m)) =
                    std::sqrt(static_cast<double>(l - m) * (l + m + 1));
        }
    s.Lm = s.Lp.adjoint();
    s.L1 = s.Lp + s.Lm;
    s.L1 *= cplx(0.5, 0.0);
    s.L2 = s.Lp - s.Lm;
    s.L2 *= cplx(0.0, -0.5);

    // Position components: the three shift directions a = +1, 0, -1 built
    // independently from their matrix elements (x+^dagger = x- then becomes a
    // genuine cross-check rather than a construction identity).
    ComplexMatrix xa[3] = {ComplexMatrix(s.dim, s.dim),
                           ComplexMatrix(s.dim, s.dim),
                           ComplexMatrix(s.dim, s.dim)};
    const int shifts[3] = {1, 0, -1};
    for (int ai = 0; ai < 3; ++ai) {
        const int a = shifts[ai];
        for (int l = 0; l <= Lambda; ++l)
            for (int m = -l; m <= l; ++m) {
                if (l >= 1 && std::abs(m + a) <= l - 1)
                    xa[ai](s.idx(l - 1, m + a), s.idx(l, m)) +=
                        s.c(l) * FuzzySphereSpace::clebsch_A(l, a, m);
                if (l + 1 <= Lambda)
                    xa[ai](s.idx(l + 1, m + a), s.idx(l, m)) +=
                        s.c(l + 1) * FuzzySphereSpace::clebsch_B(l, a, m);
            }
    }
    s.xp = xa[0];
    s.x3 = xa[1];
    s.xm = xa[2];
    s.x1 = s.xp + s.xm;
    s.x1 *= cplx(0.5, 0.0);
    s.x2 = s.xp - s.xm;
    s.x2 *= cplx(0.0, -0.5);

    s.x_sq = s.x1 * s.x1;
    s.x_sq += s.x2 * s.x2;
    s.x_sq += s.x3 * s.x3;

    s.proj_top = ComplexMatrix(s.dim, s.dim);
    for (int m = -Lambda; m <= Lambda; ++m)
        s.proj_top(s.idx(Lambda, m), s.idx(Lambda, m)) = 1.0;
    return s;
}

SphereAlgebraReport verify_sphere_algebra(const FuzzySphereSpace& s) {
    SphereAlgebraReport r;
    const std::size_t n = s.dim;
    const ComplexMatrix* L[3] = {&s.L1, &s.L2, &s.L3};
    const ComplexMatrix* X[3] = {&s.x1, &s.x2, &s.x3};

    r.hermiticity = std::max({hermiticity_defect(s.L1), hermiticity_defect(s.L2),
                              hermiticity_defect(s.L3), hermiticity_defect(s.x1),
                              hermiticity_defect(s.x2), hermiticity_defect(s.x3),
                              max_abs_diff(s.Lp.adjoint(), s.Lm),
                              max_abs_diff(s.xp.adjoint(), s.xm)});

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            ComplexMatrix targetL(n, n), targetX(n, n);
            for (int h = 0; h < 3; ++h) {
                const int e = eps3(i, j, h);
                if (e == 0) continue;
                targetL += cplx(0.0, static_cast<double>(e)) * (*L[h]);
                targetX += cplx(0.0, static_cast<double>(e)) * (*X[h]);
            }
            r.L_brackets = std::max(
                r.L_brackets, max_abs_diff(commutator(*L[i], *L[j]), targetL));
            r.Lx_brackets = std::max(
                r.Lx_brackets, max_abs_diff(commutator(*L[i], *X[j]), targetX));
        }

    ComplexMatrix xdotl(n, n), ldotx(n, n);
    for (int i = 0; i < 3; ++i) {
        xdotl += (*X[i]) * (*L[i]);
        ldotx += (*L[i]) * (*X[i]);
    }
    r.x_dot_L = std::max(xdotl.max_abs(), ldotx.max_abs());

    ComplexMatrix casimir = s.L1 * s.L1;
    casimir += s.L2 * s.L2;
    casimir += s.L3 * s.L3;
    r.casimir_assembly = max_abs_diff(casimir, s.L_sq);

    ComplexMatrix w = ComplexMatrix::identity(n);
    w *= cplx(-1.0 / s.k);
    w += cplx(s.K) * s.proj_top;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            ComplexMatrix target(n, n);
            for (int h = 0; h < 3; ++h) {
                const int e = eps3(i, j, h);
                if (e == 0) continue;
                target += cplx(0.0, static_cast<double>(e)) * (w * (*L[h]));
            }
            r.xx_brackets = std::max(
                r.xx_brackets, max_abs_diff(commutator(*X[i], *X[j]), target));
        }

    ComplexMatrix xsq_closed = ComplexMatrix::identity(n);
    xsq_closed += cplx(1.0 / s.k) * (s.L_sq + ComplexMatrix::identity(n));
    const double top_coeff =
        (1.0 + static_cast<double>(s.Lambda + 1) * (s.Lambda + 1) / s.k) *
        (s.Lambda + 1.0) / (2.0 * s.Lambda + 1.0);
    xsq_closed -= cplx(top_coeff) * s.proj_top;
    r.x_sq_closed_form = max_abs_diff(s.x_sq, xsq_closed);

    ComplexMatrix minpoly = ComplexMatrix::identity(n);
    for (int l = 0; l <= s.Lambda; ++l) {
        ComplexMatrix factor = s.L_sq;
        factor -= cplx(static_cast<double>(l) * (l + 1)) *
                  ComplexMatrix::identity(n);
        minpoly = minpoly * factor;
    }
    r.min_poly_L_sq = minpoly.max_abs();

    for (int l = 0; l <= s.Lambda; ++l) {
        ComplexMatrix block = ComplexMatrix(n, n);
        for (int m = -l; m <= l; ++m) block(s.idx(l, m), s.idx(l, m)) = 1.0;
        ComplexMatrix prod = block;
        for (int m = -l; m <= l; ++m) {
            ComplexMatrix factor = s.L3;
            factor -= cplx(static_cast<double>(m)) * ComplexMatrix::identity(n);
            prod = factor * prod;
        }
        r.min_poly_L3 = std::max(r.min_poly_L3, prod.max_abs());
    }

    ComplexMatrix pp = ComplexMatrix::identity(n);
    ComplexMatrix pm = ComplexMatrix::identity(n);
    for (int p = 0; p < 2 * s.Lambda + 1; ++p) {
        pp = pp * s.xp;
        pm = pm * s.xm;
    }
    r.nilpotency = std::max(pp.max_abs(), pm.max_abs());

    r.max_residual = std::max({r.hermiticity, r.L_brackets, r.Lx_brackets,
                               r.x_dot_L, r.casimir_assembly, r.xx_brackets,
                               r.x_sq_closed_form, r.min_poly_L_sq,
                               r.min_poly_L3, r.nilpotency});
    return r;
}

So4Report sphere_so4_check(const FuzzySphereSpace& s) {
    So4Report r;
    const std::size_t n = s.dim;

    std::vector<double> g(s.Lambda + 1, 1.0);
    for (int l = 0; l <= s.Lambda; ++l) {
        double ratio = 1.0;
        for (int h = 0; h < l; ++h) ratio *= s.Lambda + l - 2 * h;
        for (int h = 0; h <= l; ++h) ratio /= s.Lambda + l + 1 - 2 * h;
        for (int j = 0; 2 * j <= l - 1; ++j) {
            const double up = l - 2 * j;
            const double dn = l - 1 - 2 * j;
            ratio *= (1.0 + up * up / s.k) / (1.0 + dn * dn / s.k);
        }
        g[l] = std::sqrt(ratio);
    }
    ComplexMatrix ginv(n, n);
    for (int l = 0; l <= s.Lambda; ++l)
        for (int m = -l; m <= l; ++m)
            ginv(s.idx(l, m), s.idx(l, m)) = 1.0 / g[l];

    const ComplexMatrix* X[3] = {&s.x1, &s.x2, &s.x3};
    const ComplexMatrix* L[3] = {&s.L1, &s.L2, &s.L3};
    std::vector<ComplexMatrix> L4;
    for (int i = 0; i < 3; ++i) {
        L4.push_back(ginv * (*X[i]) * ginv);
        r.hermiticity = std::max(r.hermiticity, hermiticity_defect(L4.back()));
    }

    // Antisymmetric generator table over indices 0..3 (4 = index 3).
    std::vector<std::vector<ComplexMatrix>> Lmn(
        4, std::vector<ComplexMatrix>(4, ComplexMatrix(n, n)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int h = 0; h < 3; ++h) {
                const int e = eps3(i, j, h);
                if (e != 0) Lmn[i][j] += cplx(static_cast<double>(e)) * (*L[h]);
            }
    for (int i = 0; i < 3; ++i) {
        Lmn[3][i] = L4[i];
        Lmn[i][3] = cplx(-1.0) * L4[i];
    }

    const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& ab : pairs)
        for (const auto& cd : pairs) {
            const int la = ab[0], mu = ab[1], nu = cd[0], rho = cd[1];
            ComplexMatrix target(n, n);
            if (la == nu) target += Lmn[mu][rho];
            if (la == rho) target -= Lmn[mu][nu];
            if (mu == nu) target -= Lmn[la][rho];
            if (mu == rho) target += Lmn[la][nu];
            target *= cplx(0.0, 1.0);
            r.bracket_residual = std::max(
                r.bracket_residual,
                max_abs_diff(commutator(Lmn[la][mu], Lmn[nu][rho]), target));
        }

    ComplexMatrix cas(n, n);
    for (const auto& ab : pairs) cas += Lmn[ab[0]][ab[1]] * Lmn[ab[0]][ab[1]];
    r.casimir_measured = (cas.trace() / static_cast<double>(n)).real();
    ComplexMatrix dev = cas;
    dev -= cplx(r.casimir_measured) * ComplexMatrix::identity(n);
    r.casimir_constancy = dev.max_abs();
    r.casimir_expected = static_cast<double>(s.Lambda) * (s.Lambda + 2);

    ComplexMatrix cas2(n, n);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    const int e = eps4(a, b, c, d);
                    if (e != 0)
                        cas2 += cplx(static_cast<double>(e)) *
                                (Lmn[a][b] * Lmn[c][d]);
                }
    r.casimir2_norm = cas2.max_abs();
    return r;
}

ComplexMatrix wigner_rotation(const FuzzySphereSpace& s, const EulerAngles& g) {
    ComplexMatrix r(s.dim, s.dim);
    for (int l = 0; l <= s.Lambda; ++l) {
        const ComplexMatrix block = irrep_rotation(l, g);
        const std::size_t off = static_cast<std::size_t>(l) * l;
        for (std::size_t i = 0; i < block.rows(); ++i)
            for (std::size_t j = 0; j < block.cols(); ++j)
                r(off + i, off + j) = block(i, j);
    }
    return r;
}

StateVector wigner_rotate(const FuzzySphereSpace& s, const EulerAngles& g,
                          const StateVector& v) {
    return matvec(wigner_rotation(s, g), v);
}

namespace {

AngularBoundAuditFull full_audit_from_moments(double mean_L_sq,
                                              const double mean_L[3]) {
    AngularBoundAuditFull out;
    out.mean_L_sq = mean_L_sq;
    out.abs_mean_L = std::sqrt(mean_L[0] * mean_L[0] + mean_L[1] * mean_L[1] +
                               mean_L[2] * mean_L[2]);
    out.slack = out.mean_L_sq - out.abs_mean_L * (out.abs_mean_L + 1.0);
    return out;
}

}  // namespace

AngularBoundAuditFull sphere_angular_bound_audit(const FuzzySphereSpace& s,
                                     const StateVector& v) {
    const double nrm = v.norm_sq();
    if (nrm <= 0.0) throw std::invalid_argument("zero state in bound audit");
    double mean_L[3] = {expectation(s.L1, v).real() / nrm,
                        expectation(s.L2, v).real() / nrm,
                        expectation(s.L3, v).real() / nrm};
    return full_audit_from_moments(expectation(s.L_sq, v).real() / nrm, mean_L);
}

AngularBoundAuditFull sphere_angular_bound_audit_mixed(const FuzzySphereSpace& s,
                                           const std::vector<StateVector>& vs,
                                           const std::vector<double>& weights) {
    if (vs.size() != weights.size() || vs.empty())
        throw std::invalid_argument("state/weight count mismatch in mixed audit");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("negative mixture weight");
        wsum += w;
    }
    if (wsum <= 0.0) throw std::invalid_argument("zero total mixture weight");
    double mean_L[3] = {0.0, 0.0, 0.0};
    double mean_L_sq = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const double nrm = vs[i].norm_sq();
        if (nrm <= 0.0) throw std::invalid_argument("zero state in mixed audit");
        const double w = weights[i] / wsum;
        mean_L[0] += w * expectation(s.L1, vs[i]).real() / nrm;
        mean_L[1] += w * expectation(s.L2, vs[i]).real() / nrm;
        mean_L[2] += w * expectation(s.L3, vs[i]).real() / nrm;
        mean_L_sq += w * expectation(s.L_sq, vs[i]).real() / nrm;
    }
    return full_audit_from_moments(mean_L_sq, mean_L);
}

ResolutionReport sphere_resolution_check(const FuzzySphereSpace& s,
                                         const StateVector& omega,
                                         std::size_t M_phi, std::size_t N_theta,
                                         std::size_t M_psi, double tol) {
    if (omega.dim() != s.dim)
        throw std::invalid_argument("seed state dimension mismatch");
    if (M_phi == 0 || N_theta == 0 || M_psi == 0)
        throw std::invalid_argument("need at least one node per angle");

    const QuadratureRule phi_rule = make_rule(
        QuadratureRule::Kind::PeriodicTrapezoid, M_phi, 0.0, 2.0 * kPi);
    const QuadratureRule psi_rule = make_rule(
        QuadratureRule::Kind::PeriodicTrapezoid, M_psi, 0.0, 2.0 * kPi);
    const QuadratureRule u_rule =
        make_rule(QuadratureRule::Kind::GaussLegendre, N_theta, -1.0, 1.0);

    std::vector<double> m_of(s.dim);
    for (int l = 0; l <= s.Lambda; ++l)
        for (int m = -l; m <= l; ++m) m_of[s.idx(l, m)] = m;

    ComplexMatrix B(s.dim, s.dim);
    for (std::size_t it = 0; it < N_theta; ++it) {
        const double theta = std::acos(u_rule.nodes[it]);
        const ComplexMatrix rot = wigner_rotation(s, {0.0, theta, 0.0});
        for (std::size_t ip = 0; ip < M_psi; ++ip) {
            const double psi = psi_rule.nodes[ip];
            StateVector seed(s.dim);
            for (std::size_t q = 0; q < s.dim; ++q)
                seed.amp[q] = omega.amp[q] * cplx(std::cos(psi * m_of[q]),
                                                  std::sin(psi * m_of[q]));
            const StateVector v = matvec(rot, seed);
            for (std::size_t jf = 0; jf < M_phi; ++jf) {
                const double phi = phi_rule.nodes[jf];
                StateVector w(s.dim);
                for (std::size_t q = 0; q < s.dim; ++q)
                    w.amp[q] = v.amp[q] * cplx(std::cos(phi * m_of[q]),
                                               std::sin(phi * m_of[q]));
                rank_one_accumulate(B, w,
                                    phi_rule.weights[jf] * u_rule.weights[it] *
                                        psi_rule.weights[ip]);
            }
        }
    }
    const double pref =
        static_cast<double>(s.dim) / (8.0 * kPi * kPi);  // (Λ+1)²/(8π²)
    B *= cplx(pref);
    return finish_resolution(B, tol);
}

ResolutionReport sphere_coset_resolution_check(const FuzzySphereSpace& s,
                                               const StateVector& phi_seed,
                                               std::size_t M_phi,
                                               std::size_t N_theta, double tol) {
    if (phi_seed.dim() != s.dim)
        throw std::invalid_argument("seed state dimension mismatch");
    if (M_phi == 0 || N_theta == 0)
        throw std::invalid_argument("need at least one node per angle");

    const QuadratureRule phi_rule = make_rule(
        QuadratureRule::Kind::PeriodicTrapezoid, M_phi, 0.0, 2.0 * kPi);
    const QuadratureRule u_rule =
        make_rule(QuadratureRule::Kind::GaussLegendre, N_theta, -1.0, 1.0);

    std::vector<double> m_of(s.dim);
    for (int l = 0; l <= s.Lambda; ++l)
        for (int m = -l; m <= l; ++m) m_of[s.idx(l, m)] = m;

    ComplexMatrix B(s.dim, s.dim);
    for (std::size_t it = 0; it < N_theta; ++it) {
        const double theta = std::acos(u_rule.nodes[it]);
        const StateVector v =
            matvec(wigner_rotation(s, {0.0, theta, 0.0}), phi_seed);
        for (std::size_t jf = 0; jf < M_phi; ++jf) {
            const double phi = phi_rule.nodes[jf];
            StateVector w(s.dim);
            for (std::size_t q = 0; q < s.dim; ++q)
                w.amp[q] = v.amp[q] * cplx(std::cos(phi * m_of[q]),
                                           std::sin(phi * m_of[q]));
            rank_one_accumulate(B, w, phi_rule.weights[jf] * u_rule.weights[it]);
        }
    }
    B *= cplx(static_cast<double>(s.dim) / (4.0 * kPi));  // (Λ+1)²/(4π)
    return finish_resolution(B, tol);
}

SphereSCSReport sphere_scs_family(const FuzzySphereSpace& s, SphereSCSKind kind,
                                  const std::vector<double>& betas,
                                  const EulerAngles& g) {
    if (betas.size() != static_cast<std::size_t>(s.Lambda + 1))
        throw std::invalid_argument("phase vector must have Lambda+1 entries");
    SphereSCSReport r;
    r.state = StateVector(s.dim);
    const double lp1 = s.Lambda + 1.0;
    for (int l = 0; l <= s.Lambda; ++l) {
        const int m = (kind == SphereSCSKind::Omega) ? l : 0;
        r.state.amp[s.idx(l, m)] =
            cplx(std::cos(betas[l]), std::sin(betas[l])) *
            (std::sqrt(2.0 * l + 1.0) / lp1);
    }
    const bool at_identity = g.phi == 0.0 && g.theta == 0.0 && g.psi == 0.0;
    if (!at_identity) r.state = wigner_rotate(s, g, r.state);

    for (int l = 0; l <= s.Lambda; ++l) {
        double level = 0.0;
        for (int m = -l; m <= l; ++m) level += std::norm(r.state.amp[s.idx(l, m)]);
        r.norm_cond_defect = std::max(
            r.norm_cond_defect, std::abs(level - (2.0 * l + 1.0) / (lp1 * lp1)));
    }

    r.mean_L3 = expectation(s.L3, r.state).real();
    r.mean_L_sq = expectation(s.L_sq, r.state).real();
    const double mean_L1 = expectation(s.L1, r.state).real();
    const double mean_L2 = expectation(s.L2, r.state).real();
    r.disp_L = r.mean_L_sq - mean_L1 * mean_L1 - mean_L2 * mean_L2 -
               r.mean_L3 * r.mean_L3;

    r.mean_xp = expectation(s.xp, r.state);
    r.mean_x3 = expectation(s.x3, r.state).real();
    const double mean_x_sq = expectation(s.x_sq, r.state).real();
    r.disp_x = mean_x_sq - std::norm(r.mean_xp) - r.mean_x3 * r.mean_x3;

    const double lam = static_cast<double>(s.Lambda);
    double defect = 0.0;
    if (kind == SphereSCSKind::Omega) {
        const double mean_L3_closed = lam * (4.0 * lam + 5.0) / (6.0 * lp1);
        r.disp_L_closed = lam *
                          (2.0 * lam * lam * lam + 32.0 * lam * lam +
                           65.0 * lam + 36.0) /
                          (36.0 * lp1 * lp1);
        cplx xp_closed = 0.0;
        for (int l = 1; l <= s.Lambda; ++l) {
            const double dph = betas[l - 1] - betas[l];
            xp_closed -= cplx(std::cos(dph), std::sin(dph)) * s.c(l) *
                         std::sqrt(2.0 * l * (2.0 * l - 1.0));
        }
        xp_closed /= lp1 * lp1;
        r.disp_x_bound = 3.0 / lp1;
        defect = std::max({std::abs(r.mean_L_sq - lam * (lam + 2.0) / 2.0),
                           std::abs(r.disp_L - r.disp_L_closed)});
        if (at_identity)
            defect = std::max({defect, std::abs(r.mean_L3 - mean_L3_closed),
                               std::abs(r.mean_xp - xp_closed)});
    } else {
        r.disp_L_closed = lam * (lam + 2.0) / 2.0;
        double x3_closed = 0.0;
        for (int l = 1; l <= s.Lambda; ++l)
            x3_closed += 2.0 * l * s.c(l) * std::cos(betas[l - 1] - betas[l]);
        x3_closed /= lp1 * lp1;
        r.disp_x_bound = 1.0 / lp1;
        defect = std::max({std::abs(r.mean_L_sq - lam * (lam + 2.0) / 2.0),
                           std::abs(r.disp_L - r.disp_L_closed)});
        if (at_identity)
            defect = std::max({defect, std::abs(mean_L1), std::abs(mean_L2),
                               std::abs(r.mean_L3), std::abs(r.mean_xp),
                               std::abs(r.mean_x3 - x3_closed)});
    }
    r.closed_form_defect = defect;
    return r;
}

SphereURAudit sphere_ur_audit(const FuzzySphereSpace& s, const StateVector& v) {
    StateVector u = v;
    u.normalize();
    SphereURAudit r;

    const DispersionReport d =
        dispersion_report({s.x1, s.x2, s.x3}, {s.L1, s.L2, s.L3}, u);
    for (int i = 0; i < 3; ++i) {
        r.var_L[i] = d.var_L[i];
        r.var_x[i] = d.var_x[i];
        r.mean_L[i] = d.mean_L[i];
        r.mean_x[i] = d.mean_x[i];
    }
    r.disp_x = d.disp_x;

    const ComplexMatrix* L[3] = {&s.L1, &s.L2, &s.L3};
    const ComplexMatrix* X[3] = {&s.x1, &s.x2, &s.x3};

    ComplexMatrix w = ComplexMatrix::identity(s.dim);
    w *= cplx(1.0 / s.k);
    w -= cplx(s.K) * s.proj_top;
    double lprime[3];
    for (int h = 0; h < 3; ++h)
        lprime[h] = expectation(w * (*L[h]), u).real();
    r.mean_L3_prime = lprime[2];

    double closed = 0.0;
    for (int l = 0; l <= s.Lambda; ++l)
        for (int m = -l; m <= l; ++m) {
            const double p = std::norm(u.amp[s.idx(l, m)]);
            closed += p * m / s.k;
            if (l == s.Lambda) closed -= s.K * p * m;
        }
    r.mean_L3_prime_closed = closed;

    const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    r.LL_min_slack = 1e300;
    r.robertson_min_slack = 1e300;
    r.second_moment_min_slack = 1e300;
    for (const auto& t : cyc) {
        const int i = t[0], j = t[1], h = t[2];
        r.LL_min_slack =
            std::min(r.LL_min_slack,
                     std::sqrt(r.var_L[i] * r.var_L[j]) -
                         0.5 * std::abs(r.mean_L[h]));
        const double anti = expectation(anticommutator(*X[i], *X[j]), u).real();
        const double cov = anti - 2.0 * r.mean_x[i] * r.mean_x[j];
        r.robertson_min_slack =
            std::min(r.robertson_min_slack,
                     4.0 * r.var_x[i] * r.var_x[j] -
                         (lprime[h] * lprime[h] + cov * cov));
        const double m2i = r.var_x[i] + r.mean_x[i] * r.mean_x[i];
        const double m2j = r.var_x[j] + r.mean_x[j] * r.mean_x[j];
        r.second_moment_min_slack =
            std::min(r.second_moment_min_slack,
                     4.0 * m2i * m2j -
                         (lprime[h] * lprime[h] + anti * anti));
    }

    r.Lx_min_slack = 1e300;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const int h = 3 - i - j;
            r.Lx_min_slack =
                std::min(r.Lx_min_slack,
                         std::sqrt(r.var_L[i] * r.var_x[j]) -
                             0.5 * std::abs(r.mean_x[h]));
        }

    r.invariant_slack =
        r.disp_x * r.disp_x -
        0.75 * (lprime[0] * lprime[0] + lprime[1] * lprime[1] +
                lprime[2] * lprime[2]);

    r.min_slack =
        std::min({r.LL_min_slack, r.Lx_min_slack, r.robertson_min_slack,
                  r.second_moment_min_slack, r.invariant_slack});
    return r;
}

BmTridiag sphere_Bm_tridiag(int Lambda, double k, int m) {
    if (Lambda < 1) throw std::invalid_argument("cutoff Lambda must be >= 1");
    if (std::abs(m) > Lambda)
        throw std::invalid_argument("|m| must not exceed Lambda");
    if (k < sphere_min_stiffness(Lambda) * (1.0 - 1e-12))
        throw std::invalid_argument("stiffness k below Lambda^2 (Lambda+1)^2");
    BmTridiag t;
    t.Lambda = Lambda;
    t.m = m;
    const int lmin = std::abs(m);
    t.diag.assign(static_cast<std::size_t>(Lambda - lmin + 1), 0.0);
    for (int l = lmin; l < Lambda; ++l) {
        const double lp = l + 1.0;
        const double cl = std::sqrt(1.0 + lp * lp / k);
        t.offdiag.push_back(cl * std::sqrt((lp * lp - static_cast<double>(m) * m) /
                                           ((2.0 * l + 1.0) * (2.0 * l + 3.0))));
    }
    return t;
}

SpectrumReport sphere_Bm_analysis(int Lambda, double k, int m) {
    const BmTridiag t = sphere_Bm_tridiag(Lambda, k, m);
    const std::size_t n = t.diag.size();
    SpectrumReport rep;
    if (n == 1) {
        rep.values = {cplx(0.0)};
        rep.vectors = ComplexMatrix::identity(1);
        rep.symmetric_spectrum = true;
        rep.simple = true;
        return rep;
    }
    const EigenResult ed = sym_tridiag_eigen(t.diag, t.offdiag);
    rep.values.assign(ed.values.begin(), ed.values.end());
    rep.vectors = ed.vectors;

    const double scale = std::max(1.0, std::abs(ed.values.back()));
    for (std::size_t j = 0; j < n; ++j) {
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = t.diag[i] * ed.vectors(i, j);
            if (i > 0) acc += t.offdiag[i - 1] * ed.vectors(i - 1, j);
            if (i + 1 < n) acc += t.offdiag[i] * ed.vectors(i + 1, j);
            acc -= ed.values[j] * ed.vectors(i, j);
            resid += std::norm(acc);
        }
        rep.max_residual = std::max(rep.max_residual, std::sqrt(resid));
    }

    bool symmetric = true;
    for (std::size_t i = 0; i < n; ++i)
        symmetric = symmetric &&
                    std::abs(ed.values[i] + ed.values[n - 1 - i]) < 1e-10 * scale;
    rep.symmetric_spectrum = symmetric;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        simple = simple && (ed.values[i + 1] - ed.values[i] > 1e-10 * scale);
    rep.simple = simple;
    return rep;
}

ChiTildeReport sphere_chi_tilde(const FuzzySphereSpace& s) {
    ChiTildeReport r;
    r.state = StateVector(s.dim);
    const double lp2 = s.Lambda + 2.0;
    const double amp = std::sqrt(2.0 / lp2);
    for (int l = 0; l <= s.Lambda; ++l)
        r.state.amp[s.idx(l, 0)] = amp * std::sin((l + 1.0) * kPi / lp2);
    r.norm_defect = std::abs(r.state.norm_sq() - 1.0);

    const double m1 = expectation(s.x1, r.state).real();
    const double m2 = expectation(s.x2, r.state).real();
    r.mean_x3 = expectation(s.x3, r.state).real();
    r.disp_x = expectation(s.x_sq, r.state).real() - m1 * m1 - m2 * m2 -
               r.mean_x3 * r.mean_x3;

    const double lp1 = s.Lambda + 1.0;
    r.bound_two_term = kPi * kPi / (lp2 * lp2) + 1.0 / (lp1 * lp1);
    r.bound_eleven = 11.0 / (lp1 * lp1);
    r.bound_reference = 1.0 / lp1;
    return r;
}

double jacobi_lemma_check(int l, int j, int h, int n) {
    if (l < 0 || j < 0) throw std::invalid_argument("levels must be >= 0");
    if (std::abs(h) > std::min(l, j) || std::abs(n) > std::min(l, j))
        throw std::invalid_argument("|h|, |n| must not exceed min(l, j)");

    const std::size_t nodes = static_cast<std::size_t>(l + j + 2);
    const QuadratureRule u_rule =
        make_rule(QuadratureRule::Kind::GaussLegendre, nodes, -1.0, 1.0);
    const double expected = (l == j) ? 2.0 / (2.0 * l + 1.0) : 0.0;

    double worst = 0.0;
    const int hs[2] = {h, -h};
    const int ns[2] = {n, -n};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const int hh = hs[a], nn = ns[b];
            double integral = 0.0;
            for (std::size_t q = 0; q < nodes; ++q) {
                const double theta = std::acos(u_rule.nodes[q]);
                const ComplexMatrix rj = irrep_theta_rotation(j, theta);
                const ComplexMatrix rl = irrep_theta_rotation(l, theta);
                const cplx oj = rj(static_cast<std::size_t>(nn + j),
                                   static_cast<std::size_t>(hh + j));
                const cplx ol = rl(static_cast<std::size_t>(nn + l),
                                   static_cast<std::size_t>(hh + l));
                integral += u_rule.weights[q] * (oj * std::conj(ol)).real();
            }
            worst = std::max(worst, std::abs(integral - expected));
        }
    return worst;
}

double rotated_overlap_closed_form(int l, int n, int h, double theta) {
    if (!(0 <= n && n <= h && h <= l))
        throw std::invalid_argument("closed form needs 0 <= n <= h <= l");
    const double ch = std::cos(0.5 * theta);
    const double sh = std::sin(0.5 * theta);
    const double sign = ((h - n) % 2 == 0) ? 1.0 : -1.0;
    const double ratio = std::sqrt(factorial(l - h) * factorial(l + h) /
                                   (factorial(l + n) * factorial(l - n)));
    const double jac = jacobi_poly(
        l - h, JacobiParams{static_cast<double>(h - n), static_cast<double>(h + n)},
        1.0 - 2.0 * sh * sh);
    return sign * std::pow(ch, n + h) * std::pow(sh, h - n) * ratio * jac;
}

namespace {

using f128 = __float128;
using F128Matrix = std::vector<f128>;  // row-major, dim×dim

// e^{tL₊} (p > 0) or e^{tL₋} (p < 0) for the spin-l triangle, entrywise:
//   (e^{tL₊})(r,c) = t^{r−c} √(Π ladder) / (r−c)!   for r ≥ c,
//   (e^{tL₋})(r,c) = t^{c−r} √(Π ladder) / (c−r)!   for r ≤ c,
// with the ladder products accumulated exactly (integer factors, ≤ 89 bits
// for l ≤ 8, inside the 113-bit quad mantissa).
F128Matrix triangular_exp(int l, f128 t, bool raising) {
    const int dim = 2 * l + 1;
    F128Matrix a(static_cast<std::size_t>(dim) * dim, f128(0));
    for (int c = 0; c < dim; ++c) {
        f128 tpow = f128(1);
        f128 fact = f128(1);
        f128 ladder = f128(1);
        for (int p = 0; c + (raising ? p : -p) >= 0 &&
                        c + (raising ? p : -p) < dim;
             ++p) {
            const int r = c + (raising ? p : -p);
            if (p > 0) {
                tpow *= t;
                fact *= static_cast<f128>(p);
                // After p steps from column m-value c−l, the ladder factor is
                // (l∓m)(l±m+1) at the step's starting m.
                const int m = (c - l) + (raising ? (p - 1) : -(p - 1));
                const long long f =
                    raising
                        ? static_cast<long long>(l - m) * (l + m + 1)
                        : static_cast<long long>(l + m) * (l - m + 1);
                ladder *= static_cast<f128>(f);
            }
            a[static_cast<std::size_t>(r) * dim + c] =
                tpow * sqrtq(ladder) / fact;
        }
    }
    return a;
}

// rows×cols product with an interposed diagonal: (A · diag(d) · B)(r,c).
F128Matrix triple_product(const F128Matrix& a, const std::vector<f128>& d,
                          const F128Matrix& b, int dim) {
    F128Matrix out(static_cast<std::size_t>(dim) * dim, f128(0));
    for (int r = 0; r < dim; ++r)
        for (int s = 0; s < dim; ++s) {
            const f128 w = a[static_cast<std::size_t>(r) * dim + s] * d[s];
            if (w == f128(0)) continue;
            for (int c = 0; c < dim; ++c)
                out[static_cast<std::size_t>(r) * dim + c] +=
                    w * b[static_cast<std::size_t>(s) * dim + c];
        }
    return out;
}

double quad_vs_rotation(const F128Matrix& m, const ComplexMatrix& rot, int dim) {
    double worst = 0.0;
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            const cplx diff =
                cplx(static_cast<double>(
                         m[static_cast<std::size_t>(r) * dim + c]),
                     0.0) -
                rot(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            worst = std::max(worst, std::abs(diff));
        }
    return worst;
}

}  // namespace

double gauss_decomposition_check(int l, double theta) {
    if (std::abs(std::cos(0.5 * theta)) < 1e-6)
        throw std::invalid_argument("decomposition singular at theta = pi");

    // The triple products suffer catastrophic cancellation: at l = 8 and
    // θ = 0.9π single terms reach ~1e18 while the entries they sum to are
    // O(1), so double precision keeps no correct digits and long double too
    // few. Quad precision (~34 digits) leaves ≥ 15 after the cancellation.
    const f128 half = f128(0.5) * static_cast<f128>(theta);
    const f128 t = tanq(half);
    const f128 ch = cosq(half);

    const int dim = 2 * l + 1;
    const F128Matrix low = triangular_exp(l, -t, false);   // e^{−tL₋}
    const F128Matrix up = triangular_exp(l, t, true);      // e^{tL₊}

    std::vector<f128> mid_anti(dim), mid_norm(dim);
    for (int m = -l; m <= l; ++m) {
        f128 c2m = f128(1);  // cos(θ/2)^{2m}
        for (int q = 0; q < 2 * std::abs(m); ++q) c2m *= ch;
        if (m < 0) c2m = f128(1) / c2m;
        mid_anti[m + l] = c2m;          // e^{2 ln cos(θ/2) L₀}
        mid_norm[m + l] = f128(1) / c2m;   // e^{−2 ln cos(θ/2) L₀}
    }

    const F128Matrix anti = triple_product(low, mid_anti, up, dim);
    const F128Matrix norm = triple_product(up, mid_norm, low, dim);

    const ComplexMatrix rot = irrep_theta_rotation(l, theta);
    return std::max(quad_vs_rotation(anti, rot, dim),
                    quad_vs_rotation(norm, rot, dim));
}

}  // namespace fsph
