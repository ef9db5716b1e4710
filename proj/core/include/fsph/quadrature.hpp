#pragma once

#include <functional>
#include <vector>

namespace fsph {

// Node/weight rule on [a,b]. Two kinds cover every integral in this project:
//  - PeriodicTrapezoid: equispaced nodes a + h·j, j = 0..n−1, h = (b−a)/n,
//    weight h each; exact for trigonometric polynomials of degree < n over a
//    full period.
//  - GaussLegendre: n-point Gauss–Legendre mapped to [a,b]; exact for
//    polynomial integrands of degree ≤ 2n−1.
struct QuadratureRule {
    enum class Kind { PeriodicTrapezoid, GaussLegendre };
    Kind kind;
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Legendre nodes are found by Newton iteration on P_n with the Chebyshev-like
// initial guess cos(π(i−1/4)/(n+1/2)), converged to 1e−14.
QuadratureRule make_rule(QuadratureRule::Kind kind, std::size_t n, double a, double b);

}  // namespace fsph
