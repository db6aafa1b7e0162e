// Phase-invariant scoring of recovered signals. The measurement model only
// determines the signal up to a global phase, so the score is the modulus
// of the normalized inner product.

#pragma once

#include "phaseret/model.hpp"

namespace phaseret {

// |x_hat^H x_true| / (||x_hat|| * ||x_true||), in [0, 1]. Returns 0 when
// x_hat is identically zero; rejects a zero x_true and mismatched lengths.
double recovery_correlation(const CVector &x_hat, const CVector &x_true);

}  // namespace phaseret
