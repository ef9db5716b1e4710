#include "fsph/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsph {

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z) {
    cplx p = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) p = p * z + coeffs[i];
    return p;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs_in) {
    std::vector<cplx> coeffs = coeffs_in;
    while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.size() < 2) throw std::invalid_argument("poly_roots: degree must be >= 1");

    const std::size_t deg = coeffs.size() - 1;
    const cplx lead = coeffs.back();
    std::vector<cplx> monic(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) monic[i] = coeffs[i] / lead;

    // Cauchy bound: all roots inside |z| ≤ 1 + max|monic coeff|.
    double radius = 0.0;
    for (std::size_t i = 0; i < deg; ++i) radius = std::max(radius, std::abs(monic[i]));
    radius = 1.0 + radius;

    std::vector<cplx> z(deg);
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < deg; ++j) {
        // Offset angle avoids starting on a symmetry axis of real polynomials.
        const double ang = two_pi * static_cast<double>(j) / static_cast<double>(deg) + 0.4;
        z[j] = 0.9 * radius * cplx(std::cos(ang), std::sin(ang));
    }

    for (int iter = 0; iter < 500; ++iter) {
        double shift_max = 0.0;
        double scale = 1.0;
        for (std::size_t j = 0; j < deg; ++j) {
            cplx denom = 1.0;
            for (std::size_t i = 0; i < deg; ++i)
                if (i != j) denom *= (z[j] - z[i]);
            if (std::abs(denom) == 0.0) {
                z[j] += cplx(1e-8, 1e-8);  // collision nudge
                continue;
            }
            const cplx delta = poly_eval(monic, z[j]) / denom;
            z[j] -= delta;
            shift_max = std::max(shift_max, std::abs(delta));
            scale = std::max(scale, std::abs(z[j]));
        }
        // Tolerance follows the size of the iterates themselves; the Cauchy
        // radius can overshoot the root magnitudes by many orders and would
        // stop the iteration while the quadratic phase still has digits to go.
        if (shift_max < 1e-15 * scale) break;
    }

    // Guarded Newton polish in extended precision. Steps are accepted only
    // when they are small and reduce |p|, so near-defective clusters (tiny
    // p′) keep their Durand–Kerner values instead of taking a noise-driven
    // jump.
    std::vector<std::complex<long double>> mq(monic.size()), dq(deg);
    for (std::size_t i = 0; i < monic.size(); ++i)
        mq[i] = std::complex<long double>(monic[i].real(), monic[i].imag());
    for (std::size_t i = 1; i <= deg; ++i)
        dq[i - 1] = mq[i] * static_cast<long double>(i);
    const auto evalq = [](const std::vector<std::complex<long double>>& c,
                          std::complex<long double> w) {
        std::complex<long double> p = 0.0L;
        for (std::size_t i = c.size(); i-- > 0;) p = p * w + c[i];
        return p;
    };
    for (std::size_t j = 0; j < deg; ++j) {
        std::complex<long double> w(z[j].real(), z[j].imag());
        for (int step = 0; step < 4; ++step) {
            const std::complex<long double> p = evalq(mq, w);
            const std::complex<long double> dp = evalq(dq, w);
            if (std::abs(dp) == 0.0L) break;
            const std::complex<long double> delta = p / dp;
            if (!std::isfinite(static_cast<double>(std::abs(delta)))) break;
            if (std::abs(delta) >
                1e-2L * std::max<long double>(1.0L, std::abs(w)))
                break;
            const std::complex<long double> wn = w - delta;
            if (std::abs(evalq(mq, wn)) > std::abs(p)) break;
            w = wn;
        }
        z[j] = cplx(static_cast<double>(w.real()), static_cast<double>(w.imag()));
    }

    std::sort(z.begin(), z.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return z;
}

}  // namespace fsph
