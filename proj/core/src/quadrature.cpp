#include "fsph/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fsph {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_pair(std::size_t n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (std::size_t j = 2; j <= n; ++j) {
        const double pj = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = pj;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule make_rule(QuadratureRule::Kind kind, std::size_t n, double a, double b) {
    if (n == 0) throw std::invalid_argument("make_rule: need at least one node");
    QuadratureRule rule;
    rule.kind = kind;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    if (kind == QuadratureRule::Kind::PeriodicTrapezoid) {
        const double h = (b - a) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            rule.nodes[j] = a + h * static_cast<double>(j);
            rule.weights[j] = h;
        }
        return rule;
    }

    // Gauss–Legendre on [−1,1], then affine map to [a,b]. Nodes are the
    // roots of P_n, found by Newton from the Chebyshev-like estimate.
    const double pi = 3.1415926535897932384626433832795;
    const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_pair(n, x, p, dp);
        // i = 0 is the node closest to +1; store ascending instead.
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[n - 1 - i] = 2.0 * half / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace fsph
