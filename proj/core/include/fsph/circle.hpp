#pragma once

#include <vector>

#include "fsph/matrix.hpp"
#include "fsph/reports.hpp"
#include "fsph/state.hpp"

namespace fsph {

// Truncated polynomial algebra on the circle: Hilbert space of dimension
// 2Λ+1 with orthonormal basis ψ_n, n = −Λ..Λ (stored at index n+Λ), angular
// momentum L ψ_n = n ψ_n, and position ladder operators
//   x₊ψ_n = b_{n+1} ψ_{n+1},   x₋ψ_n = b_n ψ_{n−1},
//   b_n = √(1 + n(n−1)/k) for 1−Λ ≤ n ≤ Λ,  b_{−Λ} = b_{Λ+1} = 0,
// with stiffness k ≥ Λ²(Λ+1)². x₁ = (x₊+x₋)/2, x₂ = (x₊−x₋)/2i.
struct FuzzyCircleSpace {
    int Lambda = 0;
    double k = 0.0;
    std::size_t dim = 0;  // 2Λ+1

    ComplexMatrix L, xp, xm, x1, x2;
    ComplexMatrix x_sq;  // x₁² + x₂²

    std::size_t idx(int n) const { return static_cast<std::size_t>(n + Lambda); }
    double b(int n) const;       // ladder coefficient, 0 outside 1−Λ..Λ
    ComplexMatrix proj(int n) const;  // P̃_n = ψ_n⟨ψ_n,·⟩
};
FuzzyCircleSpace build_circle(int Lambda, double k);

// Smallest admissible stiffness Λ²(Λ+1)².
double circle_min_stiffness(int Lambda);

// Residuals of every defining relation of the algebra:
//   [L, x±] = ±x±,
//   [x₊, x₋] = −2L/k + (1+Λ(Λ+1)/k)(P̃_Λ − P̃_{−Λ}),
//   x² = 1 + L²/k − (1+Λ(Λ+1)/k)(P̃_Λ + P̃_{−Λ})/2,
//   [x₁, x₂] = i·λ′(L, P̃_±Λ)   (the x₊x₋ relation in Cartesian form),
//   Π_{m=−Λ}^{Λ}(L − m) = 0,   (x±)^{2Λ+1} = 0,
// plus Hermiticity defects (L† = L, x₊† = x₋).
struct CircleAlgebraReport {
    double hermiticity = 0.0;
    double ladder_comm = 0.0;      // [L,x±] ∓ x±
    double ladder_exchange = 0.0;  // [x₊,x₋] closed form
    double x_sq_closed_form = 0.0;
    double cartesian_comm = 0.0;   // [x₁,x₂] − i·L′
    double min_poly_L = 0.0;
    double nilpotency = 0.0;
    double max_residual = 0.0;
};
CircleAlgebraReport verify_circle_algebra(const FuzzyCircleSpace& s);

// The operator L′ with [x₁, x₂] = i L′:
//   L′ = −L/k + (1 + Λ(Λ+1)/k)(P̃_Λ − P̃_{−Λ})/2.
ComplexMatrix circle_L_prime(const FuzzyCircleSpace& s);

// Squeezed-ladder factorization against the spin-Λ su(2) generators
// E₀ψ_n = nψ_n, E₊ψ_n = √((Λ−n)(Λ+n+1))ψ_{n+1}: the identity
//   x₊ = f₊(E₀)E₊  with  f₊(s) = √[(1+s(s−1)/k)/(Λ(Λ+1)−s(s−1))]
// is checked entrywise on the 2Λ superdiagonal entries (s = n+1 with
// n = −Λ..Λ−1), where f₊ is finite. Returns the max entry defect.
double circle_su2_check(const FuzzyCircleSpace& s);

// Equatorial coherent state with amplitudes e^{i(αm+β_m)}/√(2Λ+1).
// betas must have size 2Λ+1 (index m+Λ); the O(2)-equivariant subfamily has
// β_{−m} = β_m.
StateVector circle_scs_omega(const FuzzyCircleSpace& s, double alpha,
                             const std::vector<double>& betas);

// Closed-form audit of the state family above:
//   <L> = 0,  (ΔL)² = Λ(Λ+1)/3,
//   <x₊> = e^{−iα}/(2Λ+1) Σ_{m=1−Λ}^{Λ} e^{i(β_{m−1}−β_m)} b_m,
// and for β = 0, Λ ≥ 2 the localization bound (Δx)² < (1/2+1/(3Λ))/(Λ+1)
// ≤ 2/(3(Λ+1)). closed_form_defect is the max mismatch between the direct
// operator expectations and the closed forms.
struct CircleSCSReport {
    StateVector state;
    double mean_L = 0.0;
    double var_L = 0.0;
    double var_L_closed = 0.0;
    cplx mean_xp;
    cplx mean_xp_closed;
    double disp_x = 0.0;
    double disp_x_bound = 0.0;  // (1/2+1/(3Λ))/(Λ+1); valid for β=0
    double closed_form_defect = 0.0;
};
CircleSCSReport circle_scs_audit(const FuzzyCircleSpace& s, double alpha,
                                 const std::vector<double>& betas);

// Discrete resolution of identity: B = (2Λ+1)/M · Σ_{j=0}^{M−1} P_{ω_j} with
// ω_j = e^{iα_j L}ω, α_j = 2πj/M. For uniform-modulus ω and M ≥ 2Λ+1, B = I
// exactly; for M < 2Λ+1 aliasing leaves unit-modulus entries at
// |m−n| ≡ 0 (mod M); for non-uniform moduli B = diag((2Λ+1)|ω_n|²).
ResolutionReport circle_resolution_check(const FuzzyCircleSpace& s,
                                         std::size_t M, const StateVector& omega,
                                         double tol = 1e-12);

// Uncertainty-relation audit on one normalized state:
//   (ΔL)²(Δx₁)² ≥ ¼<x₂>²,   (ΔL)²(Δx₂)² ≥ ¼<x₁>²,
//   (ΔL)²(Δx)²  ≥ ¼(<x₁>²+<x₂>²),
//   4(Δx₁)²(Δx₂)² ≥ <L′>² + (<x₁x₂+x₂x₁> − 2<x₁><x₂>)²,
//   4<x₁²><x₂²>   ≥ <L′>² + <x₁x₂+x₂x₁>²,
// with the closed-form expectation
//   <L′> = Σ_{m=1}^{Λ−1}(|χ_{−m}|²−|χ_m|²)m/k
//        + (|χ_Λ|²−|χ_{−Λ}|²)(1/2+Λ(Λ−1)/(2k)).
// The fourth relation (centered covariance) is the Schrödinger bound for
// [x₁,x₂] = iL′; the fifth is its uncentered second-moment companion. The
// variant pairing variances with the *uncentered* anticommutator fails on
// states with large position means (e.g. a phase-rotated coherent state) and
// is therefore not audited.
struct CircleURAudit {
    double var_L = 0.0, var_x1 = 0.0, var_x2 = 0.0, disp_x = 0.0;
    double mean_x1 = 0.0, mean_x2 = 0.0;
    double heis_x1_slack = 0.0;   // (ΔL)²(Δx₁)² − ¼<x₂>²
    double heis_x2_slack = 0.0;
    double heis_total_slack = 0.0;
    double robertson_slack = 0.0;      // centered-covariance (Schrödinger) slack
    double second_moment_slack = 0.0;  // uncentered Cauchy–Schwarz slack
    double mean_L_prime = 0.0;
    double mean_L_prime_closed = 0.0;
    double anticomm_x1x2 = 0.0;   // <x₁x₂+x₂x₁>
    double min_slack = 0.0;       // most negative slack (≥ −tol expected)
};
CircleURAudit circle_ur_audit(const FuzzyCircleSpace& s, const StateVector& v);

// Exact minimizer of (Δx)² at Λ = 1 (any admissible k): the state
// (√5/4)(ψ₋₁+ψ₁) + √(3/8)ψ₀ with (Δx)² = 7/32, <x²> = 11/16. Also returns
// the dispersion as a function over the reduced parametrization
//   (Δx)²(s,t,cosα) = ½(1−s) + s² − 2st·cosα,  s=|χ₀|², t=|χ₁χ₋₁|,
// evaluated on a grid to confirm the interior minimum (s=3/8, t=(1−s)/2, α=0),
// plus the natural comparison state χ₊ = (ψ₋₁+√2ψ₀+ψ₁)/2 (top eigenvector of
// x₁ at k = ∞) whose dispersion 1/4 the minimizer beats.
struct CircleMinimizerReport {
    StateVector minimizer;
    double disp_min = 0.0;          // direct (Δx)² on the minimizer
    double disp_min_exact = 0.21875;  // 7/32
    double mean_x_sq = 0.0;         // 11/16 on the minimizer
    double grid_min = 0.0;          // min over the (s,t,α) parameter grid
    StateVector chi_plus;
    double disp_chi_plus = 0.0;     // 1/4 for every k (the 1/k terms cancel)
    double mean_x_sq_chi_plus = 0.0;  // 3/4
    cplx mean_xp_chi_plus;          // √2/2
};
CircleMinimizerReport circle_lambda1_minimizer(double k);

// Spectral study of the position component x₁ (real symmetric tridiagonal
// with off-diagonal b_n/2):
//  * full spectrum (QL), symmetry λ→−λ, simplicity;
//  * interlacing of ‖x₁‖-spectra across Λ→Λ+1 is reported by the sweep
//    helper below;
//  * localization on the top eigenvector of the free matrix ½P_{2Λ+1}(0,1,1)
//    (components cos(mπ/(2Λ+2))): <x₁> ≥ cos(π/(2Λ+2)),
//    <x²> ≤ 1 + 1/(Λ+1)², (Δx)² ≤ (1+π²/4)/(Λ+1)² < 3.5/(Λ+1)².
struct CircleX1Analysis {
    SpectrumReport spectrum;
    double top_eigenvalue = 0.0;
    StateVector cosine_vector;       // normalized cos-profile state
    double mean_x1_cosine = 0.0;
    double mean_x1_lower_bound = 0.0;   // cos(π/(2Λ+2))
    double mean_x_sq_cosine = 0.0;
    double mean_x_sq_upper_bound = 0.0; // 1 + 1/(Λ+1)²
    double disp_cosine = 0.0;
    double disp_upper_bound = 0.0;      // (1+π²/4)/(Λ+1)²
};
CircleX1Analysis circle_x1_analysis(const FuzzyCircleSpace& s);

// Cauchy interlacing test for a principal submatrix spectrum: with
// g = outer.size() − inner.size() rows deleted, every inner eigenvalue must
// satisfy outer_i ≤ inner_i ≤ outer_{i+g} (both sequences ascending).
bool spectra_interlace(const std::vector<double>& outer,
                       const std::vector<double>& inner, double tol = 1e-10);

// Eigenproblem of the interpolating operator a₁^μ = L − iμx₁ (complex
// symmetric tridiagonal). Eigenvalues come from Durand–Kerner on the
// three-term characteristic recurrence; eigenvectors from forward
// substitution of the defining recurrence, χ_{−Λ} = 1. For μ = 0 the basis
// vectors ψ_n are returned directly. Defective z (geometric multiplicity
// below algebraic, e.g. Λ=1, μ²=2) is flagged per eigenvalue.
struct AMuEigenReport {
    std::vector<cplx> eigenvalues;          // by descending real part
    std::vector<StateVector> eigenvectors;  // normalized
    std::vector<bool> defective;
    double max_residual = 0.0;              // max ‖(a₁^μ − z)χ‖
    double pairing_defect = 0.0;  // (z,χ) ↔ (−z,χ′), χ′_n = (−1)^n χ_{−n}
};
AMuEigenReport circle_a_mu_eigen(const FuzzyCircleSpace& s, double mu);

// One eigenbranch of L - i*mu*x1 at Lambda = 1, evaluated from the exact
// eigenvalue formula z in {0, +sqrt(1 - mu^2/2), -sqrt(1 - mu^2/2)} (the
// square root turns imaginary for mu^2 > 2).  The eigenvector is recovered
// by back-substitution, so the branch data stays accurate even at the
// defective point mu^2 = 2 where a root finder loses digits.  The predicted_*
// fields are closed-form functions of mu frozen in the tests; they are
// recomputed here from the eigenvector so callers can cross-check both.
struct AMuBranch {
    cplx z;
    StateVector state;               // normalized eigenvector
    double mean_x_norm_sq = 0.0;     // <x1>^2 + <x2>^2
    double mean_x_sq = 0.0;          // <x.x>
    double disp_x = 0.0;             // (Delta x)^2
    double var_L = 0.0;              // (Delta L)^2
    double residual = 0.0;           // ||(L - i mu x1 - z) chi||
};
std::vector<AMuBranch> circle_a_mu_lambda1_branches(const FuzzyCircleSpace& s,
                                                    double mu);

}  // namespace fsph
