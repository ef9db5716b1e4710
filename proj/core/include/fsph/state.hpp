#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

#include "fsph/matrix.hpp"

namespace fsph {

// Normalized (or normalizable) vector in a finite-dimensional Hilbert space.
// Thin wrapper over std::vector<cplx>; inner products use the physics
// convention <u,v> = sum conj(u_i) v_i (antilinear in the first slot).
struct StateVector {
    std::vector<cplx> amp;

    StateVector() = default;
    explicit StateVector(std::size_t dim) : amp(dim, cplx(0.0)) {}
    explicit StateVector(std::vector<cplx> a) : amp(std::move(a)) {}

    std::size_t dim() const { return amp.size(); }
    cplx& operator[](std::size_t i) { return amp[i]; }
    const cplx& operator[](std::size_t i) const { return amp[i]; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amp) s += std::norm(a);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

    StateVector& normalize() {
        const double n = norm();
        assert(n > 0.0);
        for (auto& a : amp) a /= n;
        return *this;
    }
};

inline cplx inner(const StateVector& u, const StateVector& v) {
    assert(u.dim() == v.dim());
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) s += std::conj(u.amp[i]) * v.amp[i];
    return s;
}

inline StateVector apply(const ComplexMatrix& m, const StateVector& v) {
    return StateVector(m.apply(v.amp));
}

// <v, A v>; for Hermitian A the imaginary part is numerical noise.
inline cplx expectation(const ComplexMatrix& a, const StateVector& v) {
    return inner(v, apply(a, v));
}

// <A^2> computed as ||A v||^2 — valid for Hermitian A only.
inline double expectation_sq_hermitian(const ComplexMatrix& a, const StateVector& v) {
    return apply(a, v).norm_sq();
}

}  // namespace fsph
