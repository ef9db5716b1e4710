#include "fsph/rotation.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fsph/eigen.hpp"

namespace fsph {

namespace {

void check_l(int l) {
    if (l < 0) throw std::invalid_argument("spin label l must be >= 0");
}

}  // namespace

ComplexMatrix spin_L3(int l) {
    check_l(l);
    const std::size_t dim = 2 * static_cast<std::size_t>(l) + 1;
    ComplexMatrix a(dim, dim);
    for (int m = -l; m <= l; ++m) {
        const std::size_t i = static_cast<std::size_t>(m + l);
        a(i, i) = static_cast<double>(m);
    }
    return a;
}

ComplexMatrix spin_Lplus(int l) {
    check_l(l);
    const std::size_t dim = 2 * static_cast<std::size_t>(l) + 1;
    ComplexMatrix a(dim, dim);
    for (int m = -l; m < l; ++m) {
        const double lm = static_cast<double>(l - m);
        const double lm1 = static_cast<double>(l + m + 1);
        a(static_cast<std::size_t>(m + 1 + l), static_cast<std::size_t>(m + l)) =
            std::sqrt(lm * lm1);
    }
    return a;
}

ComplexMatrix spin_Lminus(int l) { return spin_Lplus(l).adjoint(); }

ComplexMatrix spin_L1(int l) {
    ComplexMatrix a = spin_Lplus(l);
    a += spin_Lminus(l);
    a *= cplx(0.5, 0.0);
    return a;
}

ComplexMatrix spin_L2(int l) {
    ComplexMatrix a = spin_Lplus(l);
    a -= spin_Lminus(l);
    a *= cplx(0.0, -0.5);  // 1/(2i)
    return a;
}

namespace {

// Eigendecompositions of the spin-l L2 blocks, cached per l: a theta sweep
// reuses the same factorization for every angle.
const EigenResult& cached_L2_eigen(int l) {
    static std::map<int, EigenResult> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(l);
    if (it == cache.end()) {
        it = cache.emplace(l, hermitian_eigen(spin_L2(l))).first;
    }
    return it->second;
}

}  // namespace

ComplexMatrix irrep_theta_rotation(int l, double theta) {
    check_l(l);
    const EigenResult& ed = cached_L2_eigen(l);
    const std::size_t dim = 2 * static_cast<std::size_t>(l) + 1;
    // V · diag(e^{iθλ}) · V†
    ComplexMatrix scaled = ed.vectors;
    for (std::size_t j = 0; j < dim; ++j) {
        const double ang = theta * ed.values[j];
        const cplx phase(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < dim; ++i) scaled(i, j) *= phase;
    }
    return scaled * ed.vectors.adjoint();
}

ComplexMatrix irrep_rotation(int l, const EulerAngles& g) {
    ComplexMatrix r = irrep_theta_rotation(l, g.theta);
    const std::size_t dim = r.rows();
    for (std::size_t i = 0; i < dim; ++i) {
        const double mi = static_cast<double>(static_cast<int>(i) - l);
        const cplx row_phase(std::cos(g.phi * mi), std::sin(g.phi * mi));
        for (std::size_t j = 0; j < dim; ++j) {
            const double mj = static_cast<double>(static_cast<int>(j) - l);
            const cplx col_phase(std::cos(g.psi * mj), std::sin(g.psi * mj));
            r(i, j) *= row_phase * col_phase;
        }
    }
    return r;
}

}  // namespace fsph
