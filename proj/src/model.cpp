#include "phaseret/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace phaseret {

MeasurementEnsemble make_ensemble(CMatrix d, RVector y) {
    if (d.rows() < 1 || d.cols() < 1)
        throw std::invalid_argument("make_ensemble: empty matrix");
    if (y.size() != d.rows())
        throw std::invalid_argument(
            "make_ensemble: y has " + std::to_string(y.size()) +
            " entries but the matrix has " + std::to_string(d.rows()) +
            " rows");
    for (Eigen::Index mu = 0; mu < y.size(); ++mu) {
        if (!std::isfinite(y[mu]))
            throw std::invalid_argument("make_ensemble: non-finite y entry");
        if (y[mu] < 0.0)
            throw std::invalid_argument("make_ensemble: negative y entry");
    }
    if (!d.allFinite())
        throw std::invalid_argument("make_ensemble: non-finite matrix entry");

    MeasurementEnsemble e;
    e.d = std::move(d);
    e.y = std::move(y);
    e.column_energies.resize(e.d.cols());
    for (Eigen::Index i = 0; i < e.d.cols(); ++i)
        e.column_energies[i] = e.d.col(i).squaredNorm();
    return e;
}

}  // namespace phaseret
