#include "phaseret/rng.hpp"

#include <cmath>

namespace phaseret {

std::uint64_t splitmix64_next(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> words) {
    std::uint64_t state = base;
    std::uint64_t out = splitmix64_next(state);
    for (std::uint64_t w : words) {
        state ^= w;
        out = splitmix64_next(state);
    }
    return out;
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

std::uint64_t RandomStream::next_u64() {
    return engine_();
}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

void RandomStream::polar_pair(double &a, double &b) {
    for (;;) {
        const double u = 2.0 * uniform01() - 1.0;
        const double v = 2.0 * uniform01() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            a = u * f;
            b = v * f;
            return;
        }
    }
}

double RandomStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double a, b;
    polar_pair(a, b);
    spare_ = b;
    has_spare_ = true;
    return a;
}

std::complex<double> RandomStream::complex_gaussian(double var) {
    double a, b;
    polar_pair(a, b);
    const double scale = std::sqrt(0.5 * var);
    return {scale * a, scale * b};
}

}  // namespace phaseret
