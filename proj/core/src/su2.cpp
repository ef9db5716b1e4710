#include "fsph/su2.hpp"

#include <cmath>
#include <stdexcept>

namespace fsph {

IrrepBlock build_irrep(int l) {
    IrrepBlock rep;
    rep.l = l;
    rep.L1 = spin_L1(l);
    rep.L2 = spin_L2(l);
    rep.L3 = spin_L3(l);
    rep.Lp = spin_Lplus(l);
    rep.Lm = spin_Lminus(l);
    rep.L_sq = rep.L1 * rep.L1;
    rep.L_sq += rep.L2 * rep.L2;
    rep.L_sq += rep.L3 * rep.L3;
    return rep;
}

StateVector spin_coherent(int l, const EulerAngles& g) {
    const ComplexMatrix r = irrep_rotation(l, g);
    const std::size_t dim = r.rows();
    StateVector v;
    v.amp.resize(dim);
    const std::size_t top = dim - 1;  // m = +l column
    for (std::size_t i = 0; i < dim; ++i) v.amp[i] = r(i, top);
    return v;
}

namespace {

AngularBoundAudit audit_from_moments(double mean_L_sq, const double mean_L[3]) {
    AngularBoundAudit out;
    out.mean_L_sq = mean_L_sq;
    out.abs_mean_L = std::sqrt(mean_L[0] * mean_L[0] + mean_L[1] * mean_L[1] +
                               mean_L[2] * mean_L[2]);
    out.slack = out.mean_L_sq - out.abs_mean_L * (out.abs_mean_L + 1.0);
    return out;
}

}  // namespace

AngularBoundAudit angular_bound_audit(const IrrepBlock& rep, const StateVector& v) {
    const double nrm = v.norm_sq();
    if (nrm <= 0.0) throw std::invalid_argument("zero state in bound audit");
    double mean_L[3] = {expectation(rep.L1, v).real() / nrm,
                        expectation(rep.L2, v).real() / nrm,
                        expectation(rep.L3, v).real() / nrm};
    const double mean_L_sq = expectation(rep.L_sq, v).real() / nrm;
    return audit_from_moments(mean_L_sq, mean_L);
}

AngularBoundAudit angular_bound_audit_mixed(const IrrepBlock& rep,
                                       const std::vector<StateVector>& vs,
                                       const std::vector<double>& weights) {
    if (vs.size() != weights.size() || vs.empty())
        throw std::invalid_argument("state/weight count mismatch in mixed audit");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("negative mixture weight");
        wsum += w;
    }
    if (wsum <= 0.0) throw std::invalid_argument("zero total mixture weight");
    double mean_L[3] = {0.0, 0.0, 0.0};
    double mean_L_sq = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const double nrm = vs[i].norm_sq();
        if (nrm <= 0.0) throw std::invalid_argument("zero state in mixed audit");
        const double w = weights[i] / wsum;
        mean_L[0] += w * expectation(rep.L1, vs[i]).real() / nrm;
        mean_L[1] += w * expectation(rep.L2, vs[i]).real() / nrm;
        mean_L[2] += w * expectation(rep.L3, vs[i]).real() / nrm;
        mean_L_sq += w * expectation(rep.L_sq, vs[i]).real() / nrm;
    }
    return audit_from_moments(mean_L_sq, mean_L);
}

MadoreFS madore_fs(int l) {
    if (l < 1) throw std::invalid_argument("reference fuzzy sphere needs l >= 1");
    MadoreFS fs;
    fs.l = l;
    const double n = 2.0 * l + 1.0;
    const double scale = 2.0 / std::sqrt(n * n - 1.0);
    fs.x.push_back(spin_L1(l));
    fs.x.push_back(spin_L2(l));
    fs.x.push_back(spin_L3(l));
    for (auto& xi : fs.x) xi *= cplx(scale, 0.0);
    fs.x_sq = fs.x[0] * fs.x[0];
    fs.x_sq += fs.x[1] * fs.x[1];
    fs.x_sq += fs.x[2] * fs.x[2];
    return fs;
}

double madore_min_dispersion(int l) { return 1.0 / (l + 1.0); }

}  // namespace fsph
