#pragma once

#include <vector>

#include "fsph/matrix.hpp"

namespace fsph {

// Eigendecomposition of a Hermitian operator: values ascending, vectors as
// matched columns, orthonormal. Phase convention: in each column the entry
// of largest modulus is real and positive.
struct EigenResult {
    std::vector<double> values;
    ComplexMatrix vectors;
};

// Cyclic Jacobi with complex plane rotations. Intended for the moderate
// dimensions of truncated operator algebras (n ≲ 2000). tol is relative to
// max|A_ij|; iteration stops when every off-diagonal entry is annihilated
// below it. Input must be Hermitian (asserted up to 1e-12 · max|A|).
EigenResult hermitian_eigen(const ComplexMatrix& a, double tol = 1e-14);

// Implicit-shift QL for a real symmetric tridiagonal matrix given by its
// diagonal (size n) and subdiagonal (size n−1). Same conventions as above.
EigenResult sym_tridiag_eigen(const std::vector<double>& diag,
                              const std::vector<double>& offdiag);

}  // namespace fsph
