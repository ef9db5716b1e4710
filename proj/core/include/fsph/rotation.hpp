#pragma once

#include "fsph/matrix.hpp"

namespace fsph {

// ZYZ Euler angles for the rotation operator e^{iφL₃} e^{iθL₂} e^{iψL₃}.
struct EulerAngles {
    double phi = 0.0;
    double theta = 0.0;
    double psi = 0.0;
};

// Spin-l generator blocks in the basis m = −l..l (index m+l):
//   L₃ = diag(m),  L₊ψ^m = √((l−m)(l+m+1))ψ^{m+1},  L₋ = L₊†,
//   L₁ = (L₊+L₋)/2,  L₂ = (L₊−L₋)/2i.
ComplexMatrix spin_L3(int l);
ComplexMatrix spin_Lplus(int l);
ComplexMatrix spin_Lminus(int l);
ComplexMatrix spin_L1(int l);
ComplexMatrix spin_L2(int l);

// e^{iθL₂} on the spin-l block, via a cached eigendecomposition of L₂.
// L₂ is pure-imaginary Hermitian, so the result is real orthogonal.
ComplexMatrix irrep_theta_rotation(int l, double theta);

// Full rotation block e^{iφL₃} e^{iθL₂} e^{iψL₃} (the L₃ factors are
// diagonal phase multiplications, applied without matrix products).
ComplexMatrix irrep_rotation(int l, const EulerAngles& g);

}  // namespace fsph
