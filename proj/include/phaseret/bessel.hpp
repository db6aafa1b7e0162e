// Modified Bessel functions of the first kind, orders 0 and 1, and the
// ratio I1/I0 that weights circular-posterior statistics.
//
// Three evaluation zones: ascending power series below kappa = 15, Miller
// backward recurrence (continued-fraction family) up to 300, asymptotic
// expansions of the exponentially scaled functions beyond. The ratio is
// never formed as exp(log I1 - log I0); in the large-kappa zones the
// complement 1 - I1/I0 is computed directly so that quantities like
// kappa * (1 - I1/I0) keep full relative accuracy.

#pragma once

namespace phaseret {

// Nonnegative, finite concentration of a von Mises distribution.
// Construction rejects NaN, infinity and negative values.
class Concentration {
public:
    explicit Concentration(double kappa);
    double value() const { return kappa_; }

private:
    double kappa_;
};

// I1(kappa)/I0(kappa), the mean resultant length. Strictly increasing,
// in [0, 1) for every finite kappa.
double bessel_ratio(Concentration kappa);

// 1 - I1(kappa)/I0(kappa), without cancellation for large kappa.
double bessel_ratio_complement(Concentration kappa);

// log I0(kappa); no overflow for arbitrarily large finite kappa.
double log_bessel_i0(Concentration kappa);

// log(e^{-kappa} I0(kappa)), in (-inf, 0].
double log_bessel_i0_scaled(Concentration kappa);

}  // namespace phaseret
