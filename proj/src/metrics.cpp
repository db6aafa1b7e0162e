#include "phaseret/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phaseret {

double recovery_correlation(const CVector &x_hat, const CVector &x_true) {
    if (x_hat.size() != x_true.size())
        throw std::invalid_argument("recovery_correlation: length mismatch");
    const double nt = x_true.norm();
    if (nt == 0.0)
        throw std::invalid_argument(
            "recovery_correlation: reference signal is identically zero");
    const double nh = x_hat.norm();
    if (nh == 0.0)
        return 0.0;
    const double c = std::abs(x_hat.dot(x_true)) / (nh * nt);
    return std::min(c, 1.0);
}

}  // namespace phaseret
