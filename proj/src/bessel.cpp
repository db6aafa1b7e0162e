#include "phaseret/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace phaseret {

namespace {

constexpr double kSeriesCut = 15.0;
constexpr double kAsymptoticCut = 300.0;

struct SeriesPair {
    double i0;
    double i1;
};

// Ascending power series, valid (and overflow-free) for kappa < ~700.
// All terms are positive, so no cancellation occurs.
SeriesPair series_i0_i1(double x) {
    const double q = 0.25 * x * x;
    double t0 = 1.0;          // (q^k)/(k!)^2
    double s0 = 1.0;
    double t1 = 1.0;          // (q^k)/(k!(k+1)!)
    double s1 = 1.0;
    for (int k = 1; k < 600; ++k) {
        t0 *= q / (static_cast<double>(k) * k);
        t1 *= q / (static_cast<double>(k) * (k + 1));
        s0 += t0;
        s1 += t1;
        if (t0 < 1e-18 * s0)
            break;
    }
    return {s0, 0.5 * x * s1};
}

struct MillerResult {
    double ratio;       // I1/I0
    double i0_scaled;   // e^{-x} I0(x)
};

// Backward recurrence f_{v-1} = f_{v+1} + (2v/x) f_v started deep enough
// that the minimal solution dominates; normalized with
// e^x = I0(x) + 2 sum_{v>=1} I_v(x).
MillerResult miller_i0_i1(double x) {
    const int start = static_cast<int>(x + 25.0 * std::sqrt(x)) + 30;
    double fp = 0.0;        // f_{v+1}
    double fc = 1e-250;     // f_v
    double f0 = 0.0;
    double f1 = 0.0;
    double sum = 0.0;
    for (int v = start; v >= 1; --v) {
        const double fm = fp + (2.0 * v / x) * fc;
        sum += fc;
        if (v == 1)
            f1 = fc;
        fp = fc;
        fc = fm;
        if (std::abs(fc) > 1e250) {
            fp *= 1e-250;
            fc *= 1e-250;
            sum *= 1e-250;
            f1 *= 1e-250;
        }
    }
    f0 = fc;
    sum = f0 + 2.0 * sum;
    return {f1 / f0, f0 / sum};
}

// 1 - I1/I0 ~ sum c_k / kappa^k; coefficients of the large-argument
// expansion, usable to machine precision for kappa >= 300.
double ratio_complement_asymptotic(double x) {
    static const double c[] = {
        0.5,
        0.125,                // 1/8
        0.125,                // 1/8
        0.1953125,            // 25/128
        0.40625,              // 13/32
        1.0478515625,         // 1073/1024
        3.21875,              // 103/32
        11.466461181640625,   // 375733/32768
    };
    double u = 0.0;
    double p = 1.0 / x;
    for (double ck : c) {
        u += ck * p;
        p /= x;
    }
    return u;
}

// e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum b_k / x^k with
// b_{k+1} = b_k (2k+1)^2 / (8(k+1)); all terms positive.
double i0_scaled_asymptotic(double x) {
    double term = 1.0;
    double s = 1.0;
    for (int k = 0; k < 20; ++k) {
        term *= (2.0 * k + 1.0) * (2.0 * k + 1.0) / (8.0 * (k + 1.0) * x);
        s += term;
        if (term < 1e-18 * s)
            break;
    }
    return s / std::sqrt(2.0 * M_PI * x);
}

}  // namespace

Concentration::Concentration(double kappa) : kappa_(kappa) {
    if (std::isnan(kappa))
        throw std::invalid_argument("Concentration: kappa is NaN");
    if (!std::isfinite(kappa))
        throw std::invalid_argument("Concentration: kappa is not finite");
    if (kappa < 0.0)
        throw std::invalid_argument("Concentration: kappa is negative");
}

double bessel_ratio_complement(Concentration kappa) {
    const double x = kappa.value();
    if (x < kSeriesCut) {
        const SeriesPair s = series_i0_i1(x);
        return (s.i0 - s.i1) / s.i0;
    }
    if (x < kAsymptoticCut)
        return 1.0 - miller_i0_i1(x).ratio;
    return ratio_complement_asymptotic(x);
}

double bessel_ratio(Concentration kappa) {
    const double x = kappa.value();
    if (x == 0.0)
        return 0.0;
    double r;
    if (x < kSeriesCut) {
        const SeriesPair s = series_i0_i1(x);
        r = s.i1 / s.i0;
    } else if (x < kAsymptoticCut) {
        r = miller_i0_i1(x).ratio;
    } else {
        r = 1.0 - ratio_complement_asymptotic(x);
    }
    if (r >= 1.0)
        r = std::nextafter(1.0, 0.0);
    return r;
}

double log_bessel_i0(Concentration kappa) {
    const double x = kappa.value();
    if (x < kSeriesCut)
        return std::log(series_i0_i1(x).i0);
    if (x < kAsymptoticCut)
        return x + std::log(miller_i0_i1(x).i0_scaled);
    return x + std::log(i0_scaled_asymptotic(x));
}

double log_bessel_i0_scaled(Concentration kappa) {
    const double x = kappa.value();
    if (x < kSeriesCut)
        return std::log(series_i0_i1(x).i0) - x;
    if (x < kAsymptoticCut)
        return std::log(miller_i0_i1(x).i0_scaled);
    return std::log(i0_scaled_asymptotic(x));
}

}  // namespace phaseret
