#pragma once

#include <complex>
#include <vector>

#include "fsph/matrix.hpp"

namespace fsph {

// Localization data of a state: component means/variances of the position
// family {x_i} and angular-momentum family {L_i}, plus the frame-independent
// totals (Δx)^2 = Σ<x_i^2> − Σ<x_i>^2 and (ΔL)^2 likewise.
struct DispersionReport {
    std::vector<double> mean_x;  // <x_i>
    std::vector<double> mean_L;  // <L_i>
    std::vector<double> var_x;   // (Δx_i)^2
    std::vector<double> var_L;   // (ΔL_i)^2
    double mean_x_sq = 0.0;      // Σ_i <x_i^2>
    double mean_L_sq = 0.0;      // Σ_i <L_i^2>
    double disp_x = 0.0;         // (Δx)^2
    double disp_L = 0.0;         // (ΔL)^2
};

// Spectral analysis of a (possibly non-Hermitian) operator: eigenvalues,
// matched eigenvector columns, worst residual ||A v − λ v||, and structural
// flags filled by the analysis that produced the report.
struct SpectrumReport {
    std::vector<cplx> values;
    ComplexMatrix vectors;            // column j pairs with values[j]
    double max_residual = 0.0;
    bool symmetric_spectrum = false;  // spectrum invariant under λ → −λ
    bool simple = false;              // all eigenvalues separated
    bool interlaces_previous = false; // set by dimension sweeps
};

// Outcome of a resolution-of-identity check: B = (prefactor) Σ_g w_g P_g
// compared against I. diagonal_profile holds diag(B) for diagnosing the
// non-uniform / undersampled cases where B is diagonal but not I.
struct ResolutionReport {
    double max_identity_residual = 0.0;  // max |B_ij − δ_ij|
    std::vector<double> diagonal_profile;
    bool exact = false;  // residual below the requested tolerance
};

}  // namespace fsph
