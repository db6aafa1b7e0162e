#include "phaseret/gerchberg_saxton.hpp"

#include <cmath>
#include <stdexcept>

#include "phaseret/rng.hpp"

namespace phaseret::gs {

GsResult gs_solve(const MeasurementEnsemble &e, int iters,
                  const CVector &init) {
    if (iters < 1)
        throw std::invalid_argument("gs_solve: iters must be >= 1");
    if (init.size() != e.cols())
        throw std::invalid_argument("gs_solve: init has wrong length");

    Eigen::ColPivHouseholderQR<CMatrix> qr(e.d);
    if (qr.rank() < e.cols())
        throw std::runtime_error("gs_solve: measurement matrix is "
                                 "column-rank-deficient");

    const Eigen::Index m_rows = e.rows();
    CVector x = init;
    CVector yhat(m_rows);
    for (int t = 0; t < iters; ++t) {
        const CVector z = e.d * x;
        for (Eigen::Index mu = 0; mu < m_rows; ++mu) {
            const double az = std::abs(z[mu]);
            yhat[mu] = (az == 0.0) ? cplx(e.y[mu], 0.0)
                                   : cplx(e.y[mu] / az) * z[mu];
        }
        x = qr.solve(yhat);
    }
    return {std::move(x), iters};
}

GsResult gs_solve(const MeasurementEnsemble &e, int iters,
                  std::uint64_t seed) {
    RandomStream rng(seed);
    CVector init(e.cols());
    for (Eigen::Index i = 0; i < e.cols(); ++i)
        init[i] = rng.complex_gaussian(1.0);
    return gs_solve(e, iters, init);
}

}  // namespace phaseret::gs
