#include "fsph/specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "fsph/state.hpp"

namespace fsph {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

using u128 = unsigned __int128;

// value *= term with overflow detection.
void mul_checked(u128& value, u128 term, bool& overflow) {
    if (term != 0 && value > (~u128{0}) / term) {
        overflow = true;
        return;
    }
    value *= term;
}
}  // namespace

ComplexMatrix toeplitz_matrix(std::size_t n, double a, double b, double c) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = a;
        if (i + 1 < n) {
            m(i, i + 1) = b;
            m(i + 1, i) = c;
        }
    }
    return m;
}

SpectrumReport toeplitz_closed_form(std::size_t n, double a, double b, double c) {
    if (n == 0) throw std::invalid_argument("toeplitz_closed_form: empty matrix");
    SpectrumReport rep;
    const cplx sqrt_bc = std::sqrt(cplx(b * c, 0.0));
    const cplx ratio_root = std::sqrt(cplx(c / b, 0.0));  // (c/b)^{1/2}

    const ComplexMatrix mat = toeplitz_matrix(n, a, b, c);
    rep.vectors = ComplexMatrix(n, n);
    rep.values.resize(n);

    for (std::size_t h = 1; h <= n; ++h) {
        const cplx lambda =
            cplx(a, 0.0) + 2.0 * sqrt_bc * std::cos(h * kPi / (n + 1.0));
        rep.values[h - 1] = lambda;

        StateVector chi(n);
        cplx scale = ratio_root;  // (c/b)^{j/2} at j=1
        for (std::size_t j = 1; j <= n; ++j) {
            chi[j - 1] = scale * std::sin(h * j * kPi / (n + 1.0));
            scale *= ratio_root;
        }
        chi.normalize();
        for (std::size_t i = 0; i < n; ++i) rep.vectors(i, h - 1) = chi[i];

        StateVector resid = apply(mat, chi);
        for (std::size_t i = 0; i < n; ++i) resid[i] -= lambda * chi[i];
        rep.max_residual = std::max(rep.max_residual, resid.norm());
    }

    // Structural flags on the closed-form values.
    const double scale = 1.0 + std::abs(a) + 2.0 * std::abs(sqrt_bc);
    double sym_defect = 0.0;
    for (const cplx& v : rep.values) {
        double best = 1e300;
        for (const cplx& w : rep.values) best = std::min(best, std::abs(v + w));
        sym_defect = std::max(sym_defect, best);
    }
    rep.symmetric_spectrum = sym_defect <= 1e-12 * scale;

    double min_gap = 1e300;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            min_gap = std::min(min_gap, std::abs(rep.values[i] - rep.values[j]));
    rep.simple = (n < 2) || min_gap > 1e-10 * scale;
    return rep;
}

double hyp2f1_terminating(int n, double b, double c, double z) {
    if (n < 0) throw std::invalid_argument("hyp2f1_terminating: n must be >= 0");
    // The partial sums cancel heavily for z near/above 1 (the terms can grow
    // orders of magnitude past the result), so accumulate in quad precision.
    __float128 sum = 1.0, term = 1.0;
    const __float128 zq = z, bq = b, cq = c;
    for (int m = 0; m < n; ++m) {
        const __float128 cm = cq + m;
        if (cm == 0.0)
            throw std::invalid_argument("hyp2f1_terminating: c hits a nonpositive integer");
        term *= -zq * (static_cast<__float128>(n - m) / (m + 1)) * (bq + m) / cm;
        sum += term;
    }
    return static_cast<double>(sum);
}

double jacobi_poly(int n, const JacobiParams& p, double x) {
    if (n < 0) throw std::invalid_argument("jacobi_poly: n must be >= 0");
    // (α+1)_n / n!
    double prefactor = 1.0;
    for (int m = 0; m < n; ++m) prefactor *= (p.alpha + 1.0 + m) / (m + 1.0);
    return prefactor *
           hyp2f1_terminating(n, p.alpha + p.beta + n + 1.0, p.alpha + 1.0,
                              0.5 * (1.0 - x));
}

ExactProduct product_formula_f(int l, int h, int s) {
    if (!(l >= s && s >= h && h >= -l))
        throw std::invalid_argument("product_formula_f: need l >= s >= h >= -l");
    ExactProduct out;
    const long long ll1 = static_cast<long long>(l) * (l + 1);
    for (int j = h; j < s; ++j) {
        const long long term = ll1 - static_cast<long long>(j) * (j + 1);
        mul_checked(out.value, static_cast<u128>(term), out.overflow);
    }
    return out;
}

ExactProduct product_formula_g(int l, int h, int s) {
    if (!(l >= s && s >= h && h >= -l))
        throw std::invalid_argument("product_formula_g: need l >= s >= h >= -l");
    ExactProduct out;
    const long long ll1 = static_cast<long long>(l) * (l + 1);
    for (int j = h + 1; j <= s; ++j) {
        const long long term = ll1 - static_cast<long long>(j) * (j - 1);
        mul_checked(out.value, static_cast<u128>(term), out.overflow);
    }
    return out;
}

ExactProduct factorial_ratio_fg(int l, int h, int s) {
    if (!(l >= s && s >= h && h >= -l))
        throw std::invalid_argument("factorial_ratio_fg: need l >= s >= h >= -l");
    ExactProduct out;
    // (l−h)!/(l−s)! = Π_{t=l−s+1}^{l−h} t,  (l+s)!/(l+h)! = Π_{t=l+h+1}^{l+s} t.
    for (int t = l - s + 1; t <= l - h; ++t)
        mul_checked(out.value, static_cast<u128>(t), out.overflow);
    for (int t = l + h + 1; t <= l + s; ++t)
        mul_checked(out.value, static_cast<u128>(t), out.overflow);
    return out;
}

std::vector<SummationIdentity> summation_suite(int n) {
    if (n < 1) throw std::invalid_argument("summation_suite: n must be >= 1");
    using i128 = __int128;
    std::vector<SummationIdentity> out;

    auto push_int = [&](const std::string& name, i128 lhs, i128 rhs) {
        SummationIdentity id;
        id.name = name;
        id.exact = (lhs == rhs);
        id.defect = id.exact ? 0.0
                             : std::abs(static_cast<double>(lhs) - static_cast<double>(rhs));
        out.push_back(std::move(id));
    };

    // Σ_{h=1}^n h(h+1)···(h+j) = n(n+1)···(n+j+1)/(j+2), scaled by (j+2).
    for (int j = 0; j <= 4; ++j) {
        i128 lhs = 0;
        for (int h = 1; h <= n; ++h) {
            i128 term = 1;
            for (int i = 0; i <= j; ++i) term *= (h + i);
            lhs += term;
        }
        i128 rhs = 1;
        for (int i = 0; i <= j + 1; ++i) rhs *= (n + i);
        push_int("rising-chain-length-" + std::to_string(j + 1),
                 lhs * (j + 2), rhs);
    }

    i128 s1 = 0, s2 = 0, s3 = 0, s_h2h1 = 0, s_hh12h1 = 0, s_odd = 0;
    i128 s_hh1p12h1 = 1;  // runs h = 0..n; the h = 0 term is 1
    for (int h = 1; h <= n; ++h) {
        const i128 hh = h;
        s1 += hh;
        s2 += hh * hh;
        s3 += hh * hh * hh;
        s_h2h1 += hh * (2 * hh + 1);
        s_hh12h1 += hh * (hh + 1) * (2 * hh + 1);
        s_hh1p12h1 += (hh * (hh + 1) + 1) * (2 * hh + 1);
        s_odd += 2 * hh - 1;
    }
    const i128 N = n;
    push_int("triangular", 2 * s1, N * (N + 1));
    push_int("square-pyramid", 6 * s2, N * (N + 1) * (2 * N + 1));
    push_int("cube-square", 4 * s3, N * N * (N + 1) * (N + 1));
    push_int("h(2h+1)", 6 * s_h2h1, 4 * N * N * N + 9 * N * N + 5 * N);
    push_int("h(h+1)(2h+1)", 2 * s_hh12h1, N * (N + 1) * (N + 1) * (N + 2));
    push_int("(h^2+h+1)(2h+1)", 2 * s_hh1p12h1,
             (N + 1) * (N + 1) * (N * N + 2 * N + 2));
    push_int("odd-numbers", s_odd, N * N);

    // Trigonometric members of the catalogue (float, 1e−13).
    {
        double sum = 0.0;
        for (int m = 2; m <= n; ++m) sum += std::cos(kPi * (2 * m - 1) / (2.0 * n + 2.0));
        SummationIdentity id;
        id.name = "cosine-row-sum";
        id.defect = std::abs(sum);
        id.exact = id.defect < 1e-13;
        out.push_back(std::move(id));
    }
    {
        double worst = 0.0;
        for (int m = 2; m <= n; ++m) {
            const double lhs = 2.0 * std::sin(kPi * (n + 1 + m) / (2.0 * n + 2.0)) *
                               std::sin(kPi * (n + m) / (2.0 * n + 2.0));
            const double rhs = std::cos(kPi / (2.0 * n + 2.0)) +
                               std::cos(kPi * (2 * m - 1) / (2.0 * n + 2.0));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        SummationIdentity id;
        id.name = "product-to-sum";
        id.defect = worst;
        id.exact = worst < 1e-13;
        out.push_back(std::move(id));
    }
    return out;
}

}  // namespace fsph
