#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "fsph/dispersion.hpp"
#include "fsph/eigen.hpp"
#include "fsph/random.hpp"
#include "fsph/rotation.hpp"
#include "fsph/sphere.hpp"
#include "fsph/su2.hpp"

using namespace fsph;

namespace {

constexpr double pi = std::numbers::pi;

EulerAngles random_angles(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {2.0 * pi * u(rng), std::acos(1.0 - 2.0 * u(rng)), 2.0 * pi * u(rng)};
}

StateVector basis_state(const FuzzySphereSpace& s, int l, int m) {
    StateVector v(s.dim);
    v.amp[s.idx(l, m)] = 1.0;
    return v;
}

std::vector<double> zero_betas(int Lambda) {
    return std::vector<double>(static_cast<std::size_t>(Lambda + 1), 0.0);
}

}  // namespace

TEST_CASE("sphere construction: coefficients, layout, frozen values") {
    const FuzzySphereSpace s = build_sphere(2, 36.0);
    CHECK(s.dim == 9);
    CHECK(sphere_min_stiffness(2) == doctest::Approx(4.0 * 9.0));

    // A₁^{0,0} = √(1/3); c_l = √(1+l²/k); K(Λ=2, k=36) = 1/4.
    CHECK(FuzzySphereSpace::clebsch_A(1, 0, 0) ==
          doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
    CHECK(s.c(1) == doctest::Approx(std::sqrt(37.0 / 36.0)).epsilon(1e-15));
    CHECK(s.c(2) == doctest::Approx(std::sqrt(10.0 / 9.0)).epsilon(1e-15));
    CHECK(s.c(0) == 0.0);
    CHECK(s.c(3) == 0.0);  // c_{Λ+1} = 0: nothing leaks above the cutoff
    CHECK(s.K == doctest::Approx(0.25).epsilon(1e-15));

    // Basis layout l² + l + m.
    CHECK(s.idx(0, 0) == 0);
    CHECK(s.idx(1, -1) == 1);
    CHECK(s.idx(1, 1) == 3);
    CHECK(s.idx(2, 0) == 6);

    CHECK(hermiticity_defect(s.x1) < 1e-15);
    CHECK(hermiticity_defect(s.x3) < 1e-15);
    CHECK(hermiticity_defect(s.L2) < 1e-15);

    // x₃ preserves m, so it commutes with L₃ entry-by-entry.
    CHECK(max_abs_diff(commutator(s.x3, s.L3), ComplexMatrix(9, 9)) == 0.0);

    // x_a maps V_l into V_{l−1} ⊕ V_{l+1}: no entries inside a level or
    // across a gap of two or more.
    for (int l = 0; l <= 2; ++l)
        for (int m = -l; m <= l; ++m)
            for (int lp = 0; lp <= 2; ++lp)
                for (int mp = -lp; mp <= lp; ++mp)
                    if (std::abs(l - lp) != 1)
                        CHECK(std::abs(s.x3(s.idx(lp, mp), s.idx(l, m))) == 0.0);
}

TEST_CASE("sphere algebra relations close at machine precision") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(1.0, 3.0);
    for (int Lambda = 1; Lambda <= 4; ++Lambda) {
        const double kmin = sphere_min_stiffness(Lambda);
        for (double k : {kmin, kmin * u(rng)}) {
            const FuzzySphereSpace s = build_sphere(Lambda, k);
            const SphereAlgebraReport rep = verify_sphere_algebra(s);
            INFO("Lambda=", Lambda, " k=", k);
            CHECK(rep.hermiticity < 1e-12);
            CHECK(rep.L_brackets < 1e-12);
            CHECK(rep.Lx_brackets < 1e-12);
            CHECK(rep.x_dot_L < 1e-12);
            CHECK(rep.casimir_assembly < 1e-12);
            CHECK(rep.xx_brackets < 1e-12);
            CHECK(rep.x_sq_closed_form < 1e-12);
            CHECK(rep.min_poly_L_sq < 1e-11);
            CHECK(rep.min_poly_L3 < 1e-11);
            CHECK(rep.nilpotency < 1e-12);
            CHECK(rep.max_residual < 1e-11);
        }
    }
}

TEST_CASE("x-squared block scalars: plateau below cutoff, dip on the top level") {
    // On V_l with l < Λ: x² = 1 + (l(l+1)+1)/k. On V_Λ the projector term
    // brings it down to Λ/(2Λ+1)·(1+Λ²/k) — strictly below 1/2, approaching
    // it from below as Λ grows.
    for (int Lambda : {1, 2, 4, 8}) {
        const double k = sphere_min_stiffness(Lambda);
        const FuzzySphereSpace s = build_sphere(Lambda, k);
        for (int l = 0; l < Lambda; ++l) {
            const double want = 1.0 + (l * (l + 1.0) + 1.0) / k;
            const double got =
                expectation(s.x_sq, basis_state(s, l, std::min(l, 1))).real();
            CHECK(got == doctest::Approx(want).epsilon(1e-13));
        }
        const double lam = Lambda;
        const double top = lam / (2.0 * lam + 1.0) * (1.0 + lam * lam / k);
        for (int m : {-Lambda, 0, Lambda}) {
            const double got =
                expectation(s.x_sq, basis_state(s, Lambda, m)).real();
            CHECK(got == doctest::Approx(top).epsilon(1e-13));
        }
        CHECK(top < 0.5);
        CHECK(top > 1.0 / 3.0);
    }
}

TEST_CASE("so(4) embedding: brackets, Casimir constant, vanishing pseudoscalar") {
    for (int Lambda = 1; Lambda <= 4; ++Lambda) {
        const FuzzySphereSpace s =
            build_sphere(Lambda, sphere_min_stiffness(Lambda));
        const So4Report rep = sphere_so4_check(s);
        INFO("Lambda=", Lambda);
        CHECK(rep.hermiticity < 1e-11);
        CHECK(rep.bracket_residual < 1e-9);
        CHECK(rep.casimir_constancy < 1e-10);
        CHECK(rep.casimir_measured ==
              doctest::Approx(static_cast<double>(Lambda * (Lambda + 2)))
                  .epsilon(1e-10));
        CHECK(rep.casimir_expected ==
              doctest::Approx(static_cast<double>(Lambda * (Lambda + 2))));
        CHECK(rep.casimir2_norm < 1e-10);
    }
}

TEST_CASE("block rotations: phases at theta=0, unitarity, level structure") {
    const FuzzySphereSpace s = build_sphere(3, sphere_min_stiffness(3));

    // θ = 0 collapses to the diagonal phase operator e^{i(φ+ψ)m}.
    {
        const EulerAngles g{0.9, 0.0, 0.4};
        const ComplexMatrix r = wigner_rotation(s, g);
        for (int l = 0; l <= 3; ++l)
            for (int m = -l; m <= l; ++m) {
                const cplx want = std::exp(cplx(0.0, (g.phi + g.psi) * m));
                CHECK(std::abs(r(s.idx(l, m), s.idx(l, m)) - want) < 1e-13);
            }
    }

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 4; ++trial) {
        const EulerAngles g = random_angles(rng);
        const ComplexMatrix r = wigner_rotation(s, g);
        CHECK(max_abs_diff(r.adjoint() * r, ComplexMatrix::identity(s.dim)) <
              1e-12);

        // Rotations are block-diagonal: no matrix element connects levels.
        for (int l = 0; l <= 3; ++l)
            for (int m = -l; m <= l; ++m)
                for (int lp = 0; lp <= 3; ++lp)
                    for (int mp = -lp; mp <= lp; ++mp)
                        if (l != lp)
                            CHECK(std::abs(r(s.idx(lp, mp), s.idx(l, m))) == 0.0);

        // wigner_rotate agrees with applying the assembled operator.
        const StateVector v = random_state(s.dim, rng);
        const StateVector a = wigner_rotate(s, g, v);
        const StateVector b = apply(r, v);
        double diff = 0.0;
        for (std::size_t i = 0; i < s.dim; ++i)
            diff = std::max(diff, std::abs(a.amp[i] - b.amp[i]));
        CHECK(diff < 1e-13);
    }
}

TEST_CASE("angular localization bound on the full space") {
    const FuzzySphereSpace s = build_sphere(4, sphere_min_stiffness(4));
    std::mt19937_64 rng(2025);

    // Rotated highest-weight states of any level saturate.
    for (int l = 1; l <= 4; ++l) {
        for (int trial = 0; trial < 10; ++trial) {
            const StateVector v =
                wigner_rotate(s, random_angles(rng), basis_state(s, l, l));
            const AngularBoundAuditFull audit = sphere_angular_bound_audit(s, v);
            CHECK(std::abs(audit.slack) < 1e-10);
        }
    }

    // ψ_3^3 saturates; ψ_l^0 misses by the full Casimir l(l+1).
    CHECK(std::abs(sphere_angular_bound_audit(s, basis_state(s, 3, 3)).slack) < 1e-12);
    for (int l : {1, 2, 4})
        CHECK(sphere_angular_bound_audit(s, basis_state(s, l, 0)).slack ==
              doctest::Approx(static_cast<double>(l * (l + 1))).epsilon(1e-12));

    // Random rays across all levels respect the bound.
    double min_slack = 1e300;
    for (int trial = 0; trial < 1000; ++trial) {
        const StateVector v = random_state(s.dim, rng);
        min_slack = std::min(min_slack, sphere_angular_bound_audit(s, v).slack);
    }
    CHECK(min_slack >= -1e-11);

    // The equal mixture of |1,1> and |2,2> has slack exactly 1/4 — mixed
    // states stay strictly above the bound.
    {
        const AngularBoundAuditFull mixed = sphere_angular_bound_audit_mixed(
            s, {basis_state(s, 1, 1), basis_state(s, 2, 2)}, {0.5, 0.5});
        CHECK(mixed.slack == doctest::Approx(0.25).epsilon(1e-13));
        CHECK(mixed.slack > 1e-9);
    }
    std::uniform_real_distribution<double> uw(0.1, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<StateVector> vs;
        std::vector<double> ws;
        for (int i = 0; i < 3; ++i) {
            vs.push_back(random_state(s.dim, rng));
            ws.push_back(uw(rng));
        }
        CHECK(sphere_angular_bound_audit_mixed(s, vs, ws).slack >= -1e-11);
    }
}

TEST_CASE("coherent families: norm condition, closed forms, rotations") {
    std::mt19937_64 rng(717);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    for (int Lambda = 1; Lambda <= 6; ++Lambda) {
        const FuzzySphereSpace s =
            build_sphere(Lambda, sphere_min_stiffness(Lambda) * 1.3);
        const double lam = Lambda;
        const double lp1 = Lambda + 1.0;

        std::vector<double> betas = zero_betas(Lambda);
        for (int variant = 0; variant < 3; ++variant) {
            if (variant > 0)
                for (auto& b : betas) b = u(rng);

            const SphereSCSReport om =
                sphere_scs_family(s, SphereSCSKind::Omega, betas);
            CHECK(om.norm_cond_defect < 1e-15);
            CHECK(om.state.norm() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(om.closed_form_defect < 1e-12);
            CHECK(om.disp_L ==
                  doctest::Approx(lam *
                                  (2.0 * lam * lam * lam + 32.0 * lam * lam +
                                   65.0 * lam + 36.0) /
                                  (36.0 * lp1 * lp1))
                      .epsilon(1e-12));
            CHECK(om.mean_L3 ==
                  doctest::Approx(lam * (4.0 * lam + 5.0) / (6.0 * lp1))
                      .epsilon(1e-12));

            const SphereSCSReport ph =
                sphere_scs_family(s, SphereSCSKind::Phi, betas);
            CHECK(ph.norm_cond_defect < 1e-15);
            CHECK(ph.closed_form_defect < 1e-12);
            CHECK(ph.disp_L ==
                  doctest::Approx(lam * (lam + 2.0) / 2.0).epsilon(1e-12));
            // <x_±> = 0 for every phase profile.
            CHECK(std::abs(ph.mean_xp) < 1e-13);
        }

        // β = 0 localization bounds.
        const SphereSCSReport om0 =
            sphere_scs_family(s, SphereSCSKind::Omega, zero_betas(Lambda));
        CHECK(om0.disp_x < om0.disp_x_bound);
        CHECK(om0.disp_x_bound == doctest::Approx(3.0 / lp1));
        const SphereSCSReport ph0 =
            sphere_scs_family(s, SphereSCSKind::Phi, zero_betas(Lambda));
        CHECK(ph0.disp_x < ph0.disp_x_bound);
        CHECK(ph0.disp_x_bound == doctest::Approx(1.0 / lp1));

        // Rotations move the frame-dependent means but leave the invariant
        // audit intact.
        const SphereSCSReport rot = sphere_scs_family(
            s, SphereSCSKind::Omega, zero_betas(Lambda), random_angles(rng));
        CHECK(rot.norm_cond_defect < 1e-13);
        CHECK(rot.closed_form_defect < 1e-11);
        CHECK(rot.disp_L == doctest::Approx(om0.disp_L).epsilon(1e-11));
        CHECK(rot.disp_x == doctest::Approx(om0.disp_x).epsilon(1e-11));
    }

    // Frozen low-cutoff values: (ΔL)²_ω(Λ=1) = 135/144, (ΔL)²_φ(Λ=2) = 4.
    {
        const FuzzySphereSpace s1 = build_sphere(1, 4.0);
        const SphereSCSReport om =
            sphere_scs_family(s1, SphereSCSKind::Omega, zero_betas(1));
        CHECK(om.disp_L == doctest::Approx(0.9375).epsilon(1e-13));
        const FuzzySphereSpace s2 = build_sphere(2, 36.0);
        const SphereSCSReport ph =
            sphere_scs_family(s2, SphereSCSKind::Phi, zero_betas(2));
        CHECK(ph.disp_L == doctest::Approx(4.0).epsilon(1e-13));
    }
}

TEST_CASE("projector extraction by angular averaging") {
    // (1/2π)∫ e^{iα(L₃−h)} dα = P^h, exact on 2Λ+1 trapezoid nodes because
    // the integrand's Fourier modes range over |m−h| ≤ 2Λ.
    const int Lambda = 3;
    const FuzzySphereSpace s = build_sphere(Lambda, sphere_min_stiffness(Lambda));
    const std::size_t M = static_cast<std::size_t>(2 * Lambda + 1);
    for (int h : {-3, 0, 2}) {
        ComplexMatrix b(s.dim, s.dim);
        for (std::size_t j = 0; j < M; ++j) {
            const double alpha = 2.0 * pi * j / static_cast<double>(M);
            for (int l = 0; l <= Lambda; ++l)
                for (int m = -l; m <= l; ++m)
                    b(s.idx(l, m), s.idx(l, m)) +=
                        std::exp(cplx(0.0, alpha * (m - h))) /
                        static_cast<double>(M);
        }
        ComplexMatrix p(s.dim, s.dim);
        for (int l = std::abs(h); l <= Lambda; ++l) p(s.idx(l, h), s.idx(l, h)) = 1.0;
        CHECK(max_abs_diff(b, p) < 1e-13);
    }
}

TEST_CASE("group-averaged resolution of identity over the rotation orbit") {
    // ω⁰ seed at the stated node counts: exact.
    for (int Lambda : {1, 2, 3}) {
        const FuzzySphereSpace s =
            build_sphere(Lambda, sphere_min_stiffness(Lambda));
        const std::size_t nodes = static_cast<std::size_t>(2 * Lambda + 2);
        const SphereSCSReport om =
            sphere_scs_family(s, SphereSCSKind::Omega, zero_betas(Lambda));
        const ResolutionReport rep =
            sphere_resolution_check(s, om.state, nodes, nodes, nodes);
        INFO("Lambda=", Lambda);
        CHECK(rep.max_identity_residual < 1e-11);
        CHECK(rep.exact);
    }

    const FuzzySphereSpace s = build_sphere(2, 36.0);
    const std::size_t nodes = 6;

    // Theorem precondition is per-level norms only: any seed with level
    // weights (2l+1)/(Λ+1)² resolves, whatever its in-level profile.
    {
        std::mt19937_64 rng(99);
        StateVector seed(s.dim);
        for (int l = 0; l <= 2; ++l) {
            const StateVector block =
                random_state(static_cast<std::size_t>(2 * l + 1), rng);
            const double target = std::sqrt((2.0 * l + 1.0) / 9.0);
            for (int m = -l; m <= l; ++m)
                seed.amp[s.idx(l, m)] =
                    block.amp[static_cast<std::size_t>(m + l)] * target;
        }
        const ResolutionReport rep =
            sphere_resolution_check(s, seed, nodes, nodes, nodes);
        CHECK(rep.max_identity_residual < 1e-11);
        CHECK(rep.exact);
    }

    // A seed concentrated on ψ_Λ^Λ averages to a block scalar that vanishes
    // on every level below the cutoff.
    {
        const ResolutionReport rep = sphere_resolution_check(
            s, basis_state(s, 2, 2), nodes, nodes, nodes);
        CHECK(!rep.exact);
        REQUIRE(rep.diagonal_profile.size() == s.dim);
        for (int l = 0; l < 2; ++l)
            for (int m = -l; m <= l; ++m)
                CHECK(std::abs(rep.diagonal_profile[s.idx(l, m)]) < 1e-12);
        for (int m = -2; m <= 2; ++m)
            CHECK(rep.diagonal_profile[s.idx(2, m)] ==
                  doctest::Approx(9.0 / 5.0).epsilon(1e-11));
    }

    // Under-resolved θ rule: the quadrature misses the Wigner-d polynomial
    // degree and the identity fails.
    {
        const SphereSCSReport om =
            sphere_scs_family(s, SphereSCSKind::Omega, zero_betas(2));
        const ResolutionReport rep =
            sphere_resolution_check(s, om.state, nodes, 2, nodes);
        CHECK(rep.max_identity_residual > 1e-6);
        CHECK(!rep.exact);
    }

    // The m = 0 family resolves over the two-angle coset alone.
    for (int Lambda : {1, 2, 3}) {
        const FuzzySphereSpace sp =
            build_sphere(Lambda, sphere_min_stiffness(Lambda));
        const std::size_t n2 = static_cast<std::size_t>(2 * Lambda + 2);
        const SphereSCSReport ph =
            sphere_scs_family(sp, SphereSCSKind::Phi, zero_betas(Lambda));
        const ResolutionReport rep =
            sphere_coset_resolution_check(sp, ph.state, n2, n2);
        INFO("Lambda=", Lambda);
        CHECK(rep.max_identity_residual < 1e-11);
        CHECK(rep.exact);
    }
}

TEST_CASE("uncertainty audit on the sphere: structured and random states") {
    const FuzzySphereSpace s = build_sphere(3, sphere_min_stiffness(3));

    // L₃ = 0 eigenstates zero out every <L_i′>, so the invariant bound's
    // right-hand side vanishes.
    for (int l : {0, 1, 3}) {
        const SphereURAudit rep = sphere_ur_audit(s, basis_state(s, l, 0));
        CHECK(std::abs(rep.mean_L3_prime) < 1e-15);
        CHECK(rep.invariant_slack >= 0.0);
        CHECK(rep.min_slack >= -1e-12);
    }

    // Mirror-symmetric amplitude profiles (|χ_l^{−m}| = |χ_l^m|) force
    // <L₃′> = 0 through the closed form.
    {
        StateVector v(s.dim);
        std::mt19937_64 rng(55);
        std::uniform_real_distribution<double> u(0.2, 1.0);
        for (int l = 0; l <= 3; ++l)
            for (int m = 0; m <= l; ++m) {
                const double a = u(rng);
                v.amp[s.idx(l, m)] = a;
                v.amp[s.idx(l, -m)] = a;
            }
        v.normalize();
        const SphereURAudit rep = sphere_ur_audit(s, v);
        CHECK(std::abs(rep.mean_L3_prime) < 1e-14);
        CHECK(std::abs(rep.mean_L3_prime_closed) < 1e-14);
    }

    // Monte Carlo: every slack stays above −1e−11 and the closed form for
    // <L₃′> tracks the operator expectation.
    std::mt19937_64 rng(404);
    double min_slack = 1e300;
    for (int trial = 0; trial < 500; ++trial) {
        const StateVector v = random_state(s.dim, rng);
        const SphereURAudit rep = sphere_ur_audit(s, v);
        min_slack = std::min(min_slack, rep.min_slack);
        CHECK(std::abs(rep.mean_L3_prime - rep.mean_L3_prime_closed) < 1e-13);
    }
    CHECK(min_slack >= -1e-11);

    // Rotated coherent states carry the largest position means — the
    // regression family for the centered-covariance (Schrödinger) form.
    for (int trial = 0; trial < 25; ++trial) {
        const SphereSCSReport om = sphere_scs_family(
            s, SphereSCSKind::Omega, zero_betas(3), random_angles(rng));
        const SphereURAudit rep = sphere_ur_audit(s, om.state);
        CHECK(rep.min_slack >= -1e-11);
        CHECK(rep.robertson_min_slack >= -1e-11);
        CHECK(rep.second_moment_min_slack >= -1e-11);
    }
}

TEST_CASE("tridiagonal position blocks: frozen entries, spectra, ordering") {
    // Λ = 1, m = 0: B₀ = [[0, a],[a, 0]] with a = √(1+1/k)/√3.
    {
        const double k = 4.0;
        const BmTridiag b = sphere_Bm_tridiag(1, k, 0);
        REQUIRE(b.offdiag.size() == 1);
        const double a = std::sqrt(1.0 + 1.0 / k) / std::sqrt(3.0);
        CHECK(b.offdiag[0] == doctest::Approx(a).epsilon(1e-15));
        const SpectrumReport rep = sphere_Bm_analysis(1, k, 0);
        REQUIRE(rep.values.size() == 2);
        std::vector<double> vals{rep.values[0].real(), rep.values[1].real()};
        std::sort(vals.begin(), vals.end());
        CHECK(vals[0] == doctest::Approx(-a).epsilon(1e-14));
        CHECK(vals[1] == doctest::Approx(a).epsilon(1e-14));
    }

    // The blocks agree with direct extraction from the assembled operator.
    {
        const FuzzySphereSpace s = build_sphere(3, sphere_min_stiffness(3));
        for (int m = -3; m <= 3; ++m) {
            const BmTridiag b = sphere_Bm_tridiag(3, s.k, m);
            const int lmin = std::abs(m);
            for (int l = lmin; l < 3; ++l) {
                const double entry =
                    s.x3(s.idx(l + 1, m), s.idx(l, m)).real();
                CHECK(b.offdiag[static_cast<std::size_t>(l - lmin)] ==
                      doctest::Approx(entry).epsilon(1e-14));
            }
            for (double d : b.diag) CHECK(d == 0.0);
        }
    }

    for (int Lambda = 1; Lambda <= 20; ++Lambda) {
        const double k = sphere_min_stiffness(Lambda);
        double prev_top = 1e300;
        for (int m = 0; m <= Lambda; ++m) {
            const SpectrumReport rep = sphere_Bm_analysis(Lambda, k, m);
            INFO("Lambda=", Lambda, " m=", m);
            CHECK(rep.symmetric_spectrum);
            CHECK(rep.simple);
            CHECK(rep.max_residual < 1e-12);
            double top = -1e300;
            for (const auto& z : rep.values) top = std::max(top, z.real());
            // α₁(Λ;0) > α₁(Λ;1) > … > α₁(Λ;Λ) = 0.
            CHECK(top < prev_top - 1e-12);
            prev_top = top;
            if (m == Lambda) CHECK(std::abs(top) < 1e-14);
            if (m == 0)
                CHECK(top > std::cos(pi / (Lambda + 2.0)));
        }
    }

    // Monotone growth of the top eigenvalue with the cutoff under the
    // high-stiffness policy k = Λ⁶.
    double prev = 0.0;
    for (int Lambda = 1; Lambda <= 15; ++Lambda) {
        const double k = std::max(std::pow(static_cast<double>(Lambda), 6.0),
                                  sphere_min_stiffness(Lambda));
        const SpectrumReport rep = sphere_Bm_analysis(Lambda, k, 0);
        double top = -1e300;
        for (const auto& z : rep.values) top = std::max(top, z.real());
        CHECK(top > prev);
        prev = top;
    }

    // Spectrum densification: consecutive-gap bound on B₀ up to Λ = 40.
    for (int Lambda = 2; Lambda <= 40; ++Lambda) {
        const SpectrumReport rep =
            sphere_Bm_analysis(Lambda, sphere_min_stiffness(Lambda), 0);
        std::vector<double> vals;
        for (const auto& z : rep.values) vals.push_back(z.real());
        std::sort(vals.begin(), vals.end());
        double max_gap = 0.0;
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
            max_gap = std::max(max_gap, vals[i + 1] - vals[i]);
        CHECK(max_gap <= 2.0 * pi / (Lambda + 2.0) + 0.05);
    }
}

TEST_CASE("sine-profile trial state: normalization and localization bounds") {
    for (int Lambda = 3; Lambda <= 12; ++Lambda) {
        const FuzzySphereSpace s =
            build_sphere(Lambda, sphere_min_stiffness(Lambda));
        const ChiTildeReport rep = sphere_chi_tilde(s);
        INFO("Lambda=", Lambda);
        CHECK(std::abs(rep.norm_defect) < 1e-13);
        const double lp1 = Lambda + 1.0;
        const double lp2 = Lambda + 2.0;
        CHECK(rep.bound_two_term ==
              doctest::Approx(pi * pi / (lp2 * lp2) + 1.0 / (lp1 * lp1)));
        CHECK(rep.disp_x < rep.bound_two_term);
        CHECK(rep.disp_x < rep.bound_eleven);
        CHECK(rep.disp_x < rep.bound_reference);
        CHECK(rep.bound_reference == doctest::Approx(1.0 / lp1));
        // Beats the rigid fuzzy sphere's floor at the matched cutoff.
        CHECK(rep.disp_x < madore_min_dispersion(Lambda));
    }

    // Λ = 10: frozen comparison against 1/11.
    {
        const FuzzySphereSpace s = build_sphere(10, sphere_min_stiffness(10));
        CHECK(sphere_chi_tilde(s).disp_x < 1.0 / 11.0);
    }
}

TEST_CASE("rotated-overlap closed form matches the assembled rotation") {
    for (int l = 1; l <= 6; ++l) {
        for (double theta : {0.3, 1.2, 2.8}) {
            const ComplexMatrix r = irrep_theta_rotation(l, theta);
            for (int h = 0; h <= l; ++h)
                for (int n = 0; n <= h; ++n) {
                    const double want = rotated_overlap_closed_form(l, n, h, theta);
                    const cplx got = r(static_cast<std::size_t>(n + l),
                                       static_cast<std::size_t>(h + l));
                    INFO("l=", l, " n=", n, " h=", h, " theta=", theta);
                    CHECK(std::abs(got.imag()) < 1e-13);
                    CHECK(std::abs(got.real() - want) < 1e-12);
                }
        }
    }
}

TEST_CASE("level-orthogonality integral and triangular decompositions") {
    // ∫ sinθ <ψ_j^n, Rψ_j^h><Rψ_l^h, ψ_l^n> dθ = 2δ_{lj}/(2l+1), including
    // the four (±h, ±n) patterns inside the checker.
    for (int l = 1; l <= 4; ++l)
        for (int j = 1; j <= 4; ++j)
            for (int h = 0; h <= std::min(l, j); ++h)
                for (int n = 0; n <= std::min(l, j); ++n) {
                    INFO("l=", l, " j=", j, " h=", h, " n=", n);
                    CHECK(jacobi_lemma_check(l, j, h, n) < 1e-10);
                }

    // Antinormal and normal factorizations of e^{iθL₂}.
    for (int l = 1; l <= 5; ++l)
        for (double theta : {0.1, 1.0, 2.0}) {
            INFO("l=", l, " theta=", theta);
            CHECK(gauss_decomposition_check(l, theta) < 1e-10);
        }
}
