// Random problem-instance generation: a dense circular-Gaussian sensing
// matrix with entry variance 1/M, a circular-Gaussian signal, and modulus
// observations with an explicitly recorded planted phase per measurement.

#pragma once

#include <cstdint>

#include "phaseret/model.hpp"

namespace phaseret {

// M x N matrix with i.i.d. CN(0, 1/m_rows) entries, filled in column-major
// order. Deterministic given the seed.
CMatrix gen_matrix(Eigen::Index m_rows, Eigen::Index n_cols,
                   std::uint64_t seed);

// Length-n vector with i.i.d. CN(0, sigma_x2) entries.
CVector gen_signal(Eigen::Index n, double sigma_x2, std::uint64_t seed);

struct Observations {
    RVector y;
    GroundTruth truth;
};

// y_mu = |z_mu + n_mu| with z = D x and n_mu ~ CN(0, sigma_n2). The planted
// phase is recorded as theta_mu = -arg(z_mu + n_mu) mod 2pi, so that
// y_mu * e^{-j theta_mu} reconstructs the pre-modulus complex value.
Observations gen_observations(const CMatrix &d, const CVector &x,
                              double sigma_n2, std::uint64_t seed);

}  // namespace phaseret
