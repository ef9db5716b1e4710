#include "fsph/random.hpp"

namespace fsph {

StateVector random_state(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v[i] = cplx(re, im) / std::sqrt(2.0);
    }
    return v.normalize();
}

}  // namespace fsph
