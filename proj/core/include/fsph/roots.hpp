#pragma once

#include <vector>

#include "fsph/matrix.hpp"

namespace fsph {

// All complex roots of Σ_k coeffs[k] z^k (ascending degree, coeffs.back() ≠ 0)
// by Durand–Kerner simultaneous iteration. Initial guesses lie on a circle of
// the Cauchy root bound radius; iteration caps at 500 sweeps. Roots are
// returned sorted by descending real part, ties by descending imaginary part.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs);

// Evaluate the same polynomial (Horner).
cplx poly_eval(const std::vector<cplx>& coeffs, cplx z);

}  // namespace fsph
