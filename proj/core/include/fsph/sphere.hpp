#pragma once

#include <vector>

#include "fsph/matrix.hpp"
#include "fsph/reports.hpp"
#include "fsph/rotation.hpp"
#include "fsph/state.hpp"

namespace fsph {

// Truncated polynomial algebra on the sphere: Hilbert space of dimension
// (Λ+1)² with orthonormal basis ψ_l^m, 0 ≤ l ≤ Λ, |m| ≤ l, stored at index
// l²+l+m. Angular momentum acts irreducibly on each V_l:
//   L₀ψ_l^m = mψ_l^m,  L±ψ_l^m = √((l∓m)(l±m+1))ψ_l^{m±1};
// position components (a ∈ {+,−,0}, shifting m by a):
//   x_a ψ_l^m = c_l A_l^{a,m} ψ_{l−1}^{m+a} + c_{l+1} B_l^{a,m} ψ_{l+1}^{m+a},
//   A_l^{0,m} = √[(l+m)(l−m)/((2l+1)(2l−1))],
//   A_l^{±,m} = ±√[(l∓m)(l∓m−1)/((2l−1)(2l+1))],
//   B_l^{a,m} = A_{l+1}^{−a,m+a},
//   c_l = √(1+l²/k) for 1 ≤ l ≤ Λ,  c₀ = c_{Λ+1} = 0,
// with stiffness k ≥ Λ²(Λ+1)². x₁ = (x₊+x₋)/2, x₂ = (x₊−x₋)/2i, x₃ = x₀.
struct FuzzySphereSpace {
    int Lambda = 0;
    double k = 0.0;
    std::size_t dim = 0;  // (Λ+1)²
    double K = 0.0;       // 1/k + (1+Λ²/k)/(2Λ+1)

    ComplexMatrix L1, L2, L3, Lp, Lm;
    ComplexMatrix x1, x2, x3, xp, xm;
    // L_sq holds the block-scalar Casimir (exact diagonal l(l+1)); the
    // algebra report checks L₁²+L₂²+L₃² against it. x_sq = Σx_i² as computed.
    ComplexMatrix L_sq, x_sq;
    ComplexMatrix proj_top;  // projector onto the l = Λ subspace

    std::size_t idx(int l, int m) const {
        return static_cast<std::size_t>(l * l + l + m);
    }
    double c(int l) const;
    static double clebsch_A(int l, int a, int m);
    static double clebsch_B(int l, int a, int m);
};
FuzzySphereSpace build_sphere(int Lambda, double k);

double sphere_min_stiffness(int Lambda);  // Λ²(Λ+1)²

// Residuals of the defining relations:
//   Hermiticity of all x_i, L_i;
//   [L_i, L_j] = iε^{ijh}L_h,  [L_i, x_j] = iε^{ijh}x_h;
//   x·L = L·x = 0;
//   [x_i, x_j] = iε^{ijh}(−I/k + K·P̃_Λ)L_h;
//   x² = 1 + (L²+1)/k − [1+(Λ+1)²/k]((Λ+1)/(2Λ+1))·P̃_Λ;
//   Π_{l=0}^{Λ}[L² − l(l+1)] = 0,  Π_{m=−l}^{l}(L₃−m)·P_{V_l} = 0,
//   (x±)^{2Λ+1} = 0.
struct SphereAlgebraReport {
    double hermiticity = 0.0;
    double L_brackets = 0.0;
    double Lx_brackets = 0.0;
    double x_dot_L = 0.0;
    double casimir_assembly = 0.0;  // L₁²+L₂²+L₃² vs the stored block-scalar L²
    double xx_brackets = 0.0;
    double x_sq_closed_form = 0.0;
    double min_poly_L_sq = 0.0;
    double min_poly_L3 = 0.0;
    double nilpotency = 0.0;
    double max_residual = 0.0;
};
SphereAlgebraReport verify_sphere_algebra(const FuzzySphereSpace& s);

// so(4)-covariance check. With L_{ij} = ε^{ijh}L_h (L₁₂ = L₃ etc.) and
// L_{4i} = g⁻¹x_i g⁻¹ where g acts on V_l as the scalar
//   g(l) = √[ Π_{h=0}^{l−1}(Λ+l−2h) / Π_{h=0}^{l}(Λ+l+1−2h)
//             · Π_{j=0}^{⌊(l−1)/2⌋} (1+(l−2j)²/k)/(1+(l−1−2j)²/k) ],
// the six L_{μν} close into so(4):
//   [L_{λμ}, L_{νρ}] = i(δ_{λν}L_{μρ} − δ_{λρ}L_{μν} − δ_{μν}L_{λρ} + δ_{μρ}L_{λν}),
// the quadratic Casimir Σ_{μ<ν}L_{μν}² is the constant Λ(Λ+2), and the
// pseudoscalar Casimir ε^{λμνρ}L_{λμ}L_{νρ} vanishes.
struct So4Report {
    double bracket_residual = 0.0;
    double casimir_constancy = 0.0;   // max |(C − c·I)_ij| at measured c
    double casimir_measured = 0.0;    // c = tr(C)/dim
    double casimir_expected = 0.0;    // Λ(Λ+2)
    double casimir2_norm = 0.0;       // max |ε-contraction entry|
    double hermiticity = 0.0;         // L_{4i}† = L_{4i}
};
So4Report sphere_so4_check(const FuzzySphereSpace& s);

// Block-diagonal rotation e^{iφL₃}e^{iθL₂}e^{iψL₃} on the full space.
ComplexMatrix wigner_rotation(const FuzzySphereSpace& s, const EulerAngles& g);
StateVector wigner_rotate(const FuzzySphereSpace& s, const EulerAngles& g,
                          const StateVector& v);

// Audit of <L²> ≥ |<L>|(|<L>|+1) on the full reducible space (pure state).
struct AngularBoundAuditFull {
    double mean_L_sq = 0.0;
    double abs_mean_L = 0.0;
    double slack = 0.0;
};
AngularBoundAuditFull sphere_angular_bound_audit(const FuzzySphereSpace& s, const StateVector& v);
AngularBoundAuditFull sphere_angular_bound_audit_mixed(const FuzzySphereSpace& s,
                                           const std::vector<StateVector>& vs,
                                           const std::vector<double>& weights);

// Continuous resolution of identity over SO(3):
//   B = (Λ+1)²/(8π²) ∮ dμ(g) P_{ω_g},  dμ = dφ sinθ dθ dψ,
// discretized as trapezoid(φ, M_phi) × Gauss–Legendre(cosθ, N_theta) ×
// trapezoid(ψ, M_psi). Exact (to roundoff) when the seed ω satisfies the
// per-level norm condition Σ_h |ω_l^h|² = (2l+1)/(Λ+1)² and the node counts
// clear M ≥ 2Λ+1 (trapezoid), N ≥ Λ+1 (GL). In general B is block-scalar:
// B|V_l = (Λ+1)²‖ω_l‖²/(2l+1) · I, which diagonal_profile records.
ResolutionReport sphere_resolution_check(const FuzzySphereSpace& s,
                                         const StateVector& omega,
                                         std::size_t M_phi, std::size_t N_theta,
                                         std::size_t M_psi, double tol = 1e-11);

// Coset (two-angle) resolution for seeds supported on m = 0:
//   B = (Λ+1)²/(4π) ∫dφ ∫sinθ dθ P_{φ_g},  g = e^{iφL₃}e^{iθL₂}.
ResolutionReport sphere_coset_resolution_check(const FuzzySphereSpace& s,
                                               const StateVector& phi_seed,
                                               std::size_t M_phi,
                                               std::size_t N_theta,
                                               double tol = 1e-11);

// The two closed-form coherent families and their audits.
//  kind Omega: ω^β = Σ_l e^{iβ_l}√(2l+1)/(Λ+1) ψ_l^l:
//   <L₃> = Λ(4Λ+5)/(6(Λ+1)), <L²> = Λ(Λ+2)/2,
//   (ΔL)² = Λ(2Λ³+32Λ²+65Λ+36)/(36(Λ+1)²),
//   <x₊> = −Σ_{l=1}^{Λ} e^{i(β_{l−1}−β_l)} c_l √(2l(2l−1))/(Λ+1)²,
//   (Δx)² < 3/(Λ+1) at β = 0.
//  kind Phi: φ^β = Σ_l e^{iβ_l}√(2l+1)/(Λ+1) ψ_l^0:
//   <L_i> = 0, (ΔL)² = <L²> = Λ(Λ+2)/2,
//   <x₃> = Σ_{l=1}^{Λ} e-phases·2l·c_l/(Λ+1)² (real at β=0), <x±> = 0,
//   (Δx)² < 1/(Λ+1) at β = 0.
enum class SphereSCSKind { Omega, Phi };
struct SphereSCSReport {
    StateVector state;
    double norm_cond_defect = 0.0;  // vs (2l+1)/(Λ+1)² per level
    double mean_L3 = 0.0;
    double mean_L_sq = 0.0;
    double disp_L = 0.0;
    double disp_L_closed = 0.0;
    cplx mean_xp;
    double mean_x3 = 0.0;
    double disp_x = 0.0;
    double disp_x_bound = 0.0;      // family bound at β=0
    double closed_form_defect = 0.0;
};
// The optional rotation g carries the seed around the orbit; the per-level
// norm condition, <L²>, (ΔL)² and (Δx)² are frame-independent and stay
// audited, while the frame-dependent closed forms (<L₃>, <x₊>, <x₃>) enter
// closed_form_defect only at g = identity.
SphereSCSReport sphere_scs_family(const FuzzySphereSpace& s, SphereSCSKind kind,
                                  const std::vector<double>& betas,
                                  const EulerAngles& g = {});

// Uncertainty audit on one normalized state:
//   ΔL_i ΔL_j ≥ ½|<L_h>| (cyclic),
//   ΔL_i Δx_j ≥ ½|<x_h>| for the six i≠j pairs with ε^{ijh} ≠ 0,
//   4(Δx_i)²(Δx_j)² ≥ <L_h′>² + (<x_ix_j+x_jx_i> − 2<x_i><x_j>)² (cyclic),
//   4<x_i²><x_j²>   ≥ <L_h′>² + <x_ix_j+x_jx_i>² (cyclic),
//     with L_h′ = (I/k − K·P̃_Λ)L_h,
//   (Δx)⁴ ≥ (3/4)(<L₁′>²+<L₂′>²+<L₃′>²),
// plus the closed form for <L₃′> and its vanishing on |χ_l^{−m}| = |χ_l^m|.
// As on the circle, the variance form uses the centered covariance
// (Schrödinger bound); pairing variances with the uncentered anticommutator
// is false on states with large position means and is not audited.
struct SphereURAudit {
    double var_L[3] = {0, 0, 0};
    double var_x[3] = {0, 0, 0};
    double mean_L[3] = {0, 0, 0};
    double mean_x[3] = {0, 0, 0};
    double disp_x = 0.0;
    double LL_min_slack = 0.0;
    double Lx_min_slack = 0.0;
    double robertson_min_slack = 0.0;      // centered-covariance (Schrödinger)
    double second_moment_min_slack = 0.0;  // uncentered Cauchy–Schwarz
    double invariant_slack = 0.0;  // (Δx)⁴ − (3/4)<L′>²
    double mean_L3_prime = 0.0;
    double mean_L3_prime_closed = 0.0;
    double min_slack = 0.0;
};
SphereURAudit sphere_ur_audit(const FuzzySphereSpace& s, const StateVector& v);

// Tridiagonal block B_m of x₃ on the L₃ = m eigenspace (dimension Λ−|m|+1,
// basis l = |m|..Λ): zero diagonal, off-diagonal
//   t_l = c_{l+1}√[((l+1)²−m²)/((2l+1)(2l+3))],  l = |m|..Λ−1.
// No (Λ+1)²-dimensional operator is materialized — safe for large Λ.
struct BmTridiag {
    int Lambda = 0, m = 0;
    std::vector<double> diag;     // zeros
    std::vector<double> offdiag;  // t_l
};
BmTridiag sphere_Bm_tridiag(int Lambda, double k, int m);

// Spectrum of B_m with structural flags (symmetric_spectrum, simple).
SpectrumReport sphere_Bm_analysis(int Lambda, double k, int m);

// Localized m = 0 trial state χ̃_l = √(2/(Λ+2)) sin((l+1)π/(Λ+2)) embedded
// in the full space, with its dispersion audit:
//   (Δx)² < π²/(Λ+2)² + 1/(Λ+1)² < 11/(Λ+1)²  (Λ ≥ 3), and < 1/(Λ+1).
struct ChiTildeReport {
    StateVector state;
    double norm_defect = 0.0;   // ‖χ̃‖² − 1 (exactly 0 analytically)
    double mean_x3 = 0.0;
    double disp_x = 0.0;
    double bound_two_term = 0.0;   // π²/(Λ+2)² + 1/(Λ+1)²
    double bound_eleven = 0.0;     // 11/(Λ+1)²
    double bound_reference = 0.0;  // 1/(Λ+1)
};
ChiTildeReport sphere_chi_tilde(const FuzzySphereSpace& s);

// Orthogonality lemma for rotated level overlaps:
//   ∫₀^π sinθ <ψ_j^n, e^{iθL₂}ψ_j^h><e^{iθL₂}ψ_l^h, ψ_l^n> dθ = 2δ_{lj}/(2l+1),
// checked with an exact-degree Gauss–Legendre rule for all four sign
// patterns (±h, ±n). Returns the max defect.
double jacobi_lemma_check(int l, int j, int h, int n);

// Closed form of the rotated overlap, used as the independent oracle:
//   <ψ_l^n, e^{iθL₂}ψ_l^h> = (−1)^{h−n}(cos θ/2)^{n+h}(sin θ/2)^{h−n}
//       √[(l−h)!(l+h)!/((l+n)!(l−n)!)] · P_{l−h}^{(h−n,h+n)}(1−2sin²(θ/2)),
// valid for 0 ≤ n ≤ h ≤ l.
double rotated_overlap_closed_form(int l, int n, int h, double theta);

// Triangular (Gauss) decompositions of e^{iθL₂} on the spin-l block:
//   antinormal: e^{−tan(θ/2)L₋} e^{2 ln cos(θ/2) L₀} e^{tan(θ/2)L₊},
//   normal:     e^{tan(θ/2)L₊} e^{−2 ln cos(θ/2) L₀} e^{−tan(θ/2)L₋},
// with the nilpotent exponentials summed as finite Taylor series. Returns
// the max entry defect of both against the eigendecomposition rotation.
double gauss_decomposition_check(int l, double theta);

}  // namespace fsph
