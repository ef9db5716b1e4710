#pragma once

#include <string>
#include <vector>

#include "fsph/matrix.hpp"
#include "fsph/reports.hpp"

namespace fsph {

// n×n tridiagonal Toeplitz matrix P_n(a,b,c): a on the diagonal, b on the
// superdiagonal, c on the subdiagonal.
ComplexMatrix toeplitz_matrix(std::size_t n, double a, double b, double c);

// Closed-form eigensystem of P_n(a,b,c):
//   λ_h = a + 2√(bc)·cos(hπ/(n+1)),    χ^h_j = (c/b)^{j/2}·sin(hjπ/(n+1)),
// h, j = 1..n. For bc < 0 the spectrum is complex (√(bc) imaginary) and the
// report's symmetric_spectrum/simple flags are evaluated on the complex
// values. Eigenvectors are returned normalized.
SpectrumReport toeplitz_closed_form(std::size_t n, double a, double b, double c);

// Terminating Gauss hypergeometric series
//   F(−n, b; c; z) = Σ_{m=0}^{n} binom(n,m)(−1)^m z^m (b)_m/(c)_m,
// where (q)_m is the rising factorial. Requires c not a nonpositive integer
// above −n.
double hyp2f1_terminating(int n, double b, double c, double z);

struct JacobiParams {
    double alpha;
    double beta;
};

// Jacobi polynomial P_n^{(α,β)}(x) through the terminating hypergeometric
// connection P_n^{(α,β)}(1−2u) = ((α+1)_n/n!)·F(−n, α+β+n+1; α+1; u).
double jacobi_poly(int n, const JacobiParams& p, double x);

// Exact integer evaluation of the ladder-product factors
//   f(l,h,s) = Π_{j=h}^{s−1} [l(l+1) − j(j+1)],
//   g(l,h,s) = Π_{j=h+1}^{s} [l(l+1) − j(j−1)],
// for integers l ≥ s ≥ h ≥ −l (empty product = 1). Both equal
// (l−h)!(l+s)!/[(l+h)!(l−s)!]; the overflow flag is set if any partial
// product would exceed 128 bits (never for l ≤ 8).
struct ExactProduct {
    unsigned __int128 value = 1;
    bool overflow = false;
};
ExactProduct product_formula_f(int l, int h, int s);
ExactProduct product_formula_g(int l, int h, int s);
// The shared closed form, computed by telescoped integer products.
ExactProduct factorial_ratio_fg(int l, int h, int s);

// Fixed catalogue of finite-summation identities evaluated at a given n.
// Integer identities are checked exactly in 128-bit arithmetic after scaling
// away the rational denominators; the two trigonometric identities in the
// catalogue are checked to 1e−13. `exact` reports the per-identity outcome.
struct SummationIdentity {
    std::string name;
    bool exact = false;
    double defect = 0.0;  // 0 for integer identities that hold
};
std::vector<SummationIdentity> summation_suite(int n);

}  // namespace fsph
