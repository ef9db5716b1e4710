#include "fsph/dispersion.hpp"

#include <cmath>
#include <stdexcept>

namespace fsph {

DispersionReport dispersion_report(const std::vector<ComplexMatrix>& xs,
                                   const std::vector<ComplexMatrix>& Ls,
                                   const StateVector& state) {
    DispersionReport rep;

    auto account = [&](const std::vector<ComplexMatrix>& ops, std::vector<double>& means,
                       std::vector<double>& vars, double& total_sq, double& disp) {
        total_sq = 0.0;
        double mean_norm_sq = 0.0;
        for (const auto& op : ops) {
            const StateVector img = apply(op, state);
            const cplx mean = inner(state, img);
            if (std::abs(mean.imag()) > 1e-8 * (1.0 + std::abs(mean.real())))
                throw std::invalid_argument(
                    "dispersion_report: operator expectation is not real "
                    "(non-Hermitian input?)");
            const double m = mean.real();
            const double sq = img.norm_sq();  // <A²> for Hermitian A
            means.push_back(m);
            vars.push_back(sq - m * m);
            total_sq += sq;
            mean_norm_sq += m * m;
        }
        disp = total_sq - mean_norm_sq;
    };

    account(xs, rep.mean_x, rep.var_x, rep.mean_x_sq, rep.disp_x);
    account(Ls, rep.mean_L, rep.var_L, rep.mean_L_sq, rep.disp_L);
    return rep;
}

}  // namespace fsph
