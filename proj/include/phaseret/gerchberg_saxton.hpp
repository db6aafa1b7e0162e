// Gerchberg-Saxton alternating projections: alternate between the column
// span of the measurement matrix and the set of vectors with the observed
// moduli. The pseudo-inverse is applied through a rank-revealing QR
// factorization computed once per run.

#pragma once

#include <cstdint>

#include "phaseret/model.hpp"

namespace phaseret::gs {

struct GsResult {
    CVector x_hat;
    int iterations = 0;
};

// Runs `iters` rounds of z = D x, yhat = y .* z/|z| (phase 1 where z = 0),
// x = pinv(D) yhat, starting from the given coefficients. Throws
// std::invalid_argument for bad arguments and std::runtime_error when D is
// column-rank-deficient.
GsResult gs_solve(const MeasurementEnsemble &ensemble, int iters,
                  const CVector &init);

// Same, starting from seeded i.i.d. CN(0, 1) coefficients.
GsResult gs_solve(const MeasurementEnsemble &ensemble, int iters,
                  std::uint64_t seed);

inline constexpr int kDefaultIters = 3000;

}  // namespace phaseret::gs
