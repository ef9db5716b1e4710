#pragma once

#include <vector>

#include "fsph/reports.hpp"
#include "fsph/state.hpp"

namespace fsph {

// Localization report for a normalized state against a position family xs
// and an angular-momentum family Ls (each entry Hermitian). Means come from
// Re<v, A v> (the imaginary part must be noise-level and is asserted so);
// second moments from ||A v||^2.
DispersionReport dispersion_report(const std::vector<ComplexMatrix>& xs,
                                   const std::vector<ComplexMatrix>& Ls,
                                   const StateVector& state);

}  // namespace fsph
