#pragma once

#include <vector>

#include "fsph/matrix.hpp"
#include "fsph/reports.hpp"
#include "fsph/rotation.hpp"
#include "fsph/state.hpp"

namespace fsph {

// One irreducible spin-l block with its generator matrices.
struct IrrepBlock {
    int l = 0;
    ComplexMatrix L1, L2, L3, Lp, Lm;  // basis m = −l..l
    ComplexMatrix L_sq;                // L₁²+L₂²+L₃² = l(l+1)·I
};
IrrepBlock build_irrep(int l);

// Rotated highest-weight state π_l(g)|l,l⟩ — the spin coherent state.
StateVector spin_coherent(int l, const EulerAngles& g);

// Audit of the angular-momentum localization bound
//   <L²> ≥ |<L>|(|<L>|+1)
// for a pure state on one irrep (slack = lhs − rhs; saturation ⇔ slack 0).
struct AngularBoundAudit {
    double mean_L_sq = 0.0;  // <L²>
    double abs_mean_L = 0.0; // |<L>|
    double slack = 0.0;
};
AngularBoundAudit angular_bound_audit(const IrrepBlock& rep, const StateVector& v);

// Same bound for a mixed state ρ = Σ w_i |v_i><v_i| (weights normalized
// internally): <A> = Σ w_i <v_i, A v_i>.
AngularBoundAudit angular_bound_audit_mixed(const IrrepBlock& rep,
                                       const std::vector<StateVector>& vs,
                                       const std::vector<double>& weights);

// Reference fuzzy sphere with x_i = 2L_i/√(n²−1), n = 2l+1: x² = 1 exactly,
// and the minimal dispersion (Δx)² over all states is 1/(l+1), attained on
// the highest-weight state.
struct MadoreFS {
    int l = 0;
    std::vector<ComplexMatrix> x;  // x₁, x₂, x₃
    ComplexMatrix x_sq;            // Σ x_i²
};
MadoreFS madore_fs(int l);
double madore_min_dispersion(int l);  // = 1/(l+1)

}  // namespace fsph
