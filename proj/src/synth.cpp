#include "phaseret/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "phaseret/rng.hpp"

namespace phaseret {

CMatrix gen_matrix(Eigen::Index m_rows, Eigen::Index n_cols,
                   std::uint64_t seed) {
    if (m_rows < 1 || n_cols < 1)
        throw std::invalid_argument("gen_matrix: empty dimensions");
    RandomStream rng(seed);
    const double var = 1.0 / static_cast<double>(m_rows);
    CMatrix d(m_rows, n_cols);
    for (Eigen::Index j = 0; j < n_cols; ++j)
        for (Eigen::Index i = 0; i < m_rows; ++i)
            d(i, j) = rng.complex_gaussian(var);
    return d;
}

CVector gen_signal(Eigen::Index n, double sigma_x2, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("gen_signal: empty dimension");
    if (!(sigma_x2 > 0.0))
        throw std::invalid_argument("gen_signal: variance must be positive");
    RandomStream rng(seed);
    CVector x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x[i] = rng.complex_gaussian(sigma_x2);
    return x;
}

Observations gen_observations(const CMatrix &d, const CVector &x,
                              double sigma_n2, std::uint64_t seed) {
    if (x.size() != d.cols())
        throw std::invalid_argument("gen_observations: dimension mismatch");
    if (sigma_n2 < 0.0)
        throw std::invalid_argument("gen_observations: negative variance");

    const Eigen::Index m = d.rows();
    RandomStream rng(seed);
    const CVector z = d * x;

    Observations obs;
    obs.y.resize(m);
    obs.truth.x = x;
    obs.truth.theta.resize(m);
    obs.truth.noise.resize(m);
    obs.truth.seed = seed;

    const double two_pi = 2.0 * M_PI;
    for (Eigen::Index mu = 0; mu < m; ++mu) {
        const cplx n_mu = rng.complex_gaussian(sigma_n2);
        const cplx w = z[mu] + n_mu;
        obs.truth.noise[mu] = n_mu;
        obs.y[mu] = std::abs(w);
        double theta = std::fmod(-std::arg(w), two_pi);
        if (theta < 0.0)
            theta += two_pi;
        if (theta >= two_pi)  // fmod rounding can land exactly on 2pi
            theta = 0.0;
        obs.truth.theta[mu] = theta;
    }
    return obs;
}

}  // namespace phaseret
