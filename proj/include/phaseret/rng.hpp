// Seeded randomness with bit-stable output across platforms and runs.
//
// All draws go through one fixed pipeline: a Mersenne Twister engine whose
// raw 64-bit words are mapped to uniforms by an explicit bit transform, and
// Gaussians produced by Marsaglia polar rejection. Standard-library
// distribution objects are avoided on purpose — their output sequences are
// implementation-defined, which would break reproducibility guarantees.

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace phaseret {

// One step of the SplitMix64 sequence; also the mixing finalizer used to
// derive independent child seeds from a master seed plus context words.
std::uint64_t splitmix64_next(std::uint64_t &state);

// Deterministically derives a child seed by absorbing each word into the
// SplitMix64 state. Distinct word lists give statistically independent
// streams for the same base seed.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> words);

// A sequential stream of uniforms, Gaussians, and circular complex
// Gaussians. Not thread-safe; use one stream per logical task.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();

    // Standard normal via polar rejection; pairs are produced two at a
    // time and the spare is cached.
    double gaussian();

    // Circular complex Gaussian CN(0, var): independent real and
    // imaginary parts with variance var/2 each, taken from one fresh
    // polar pair (the gaussian() cache is never consulted).
    std::complex<double> complex_gaussian(double var);

private:
    void polar_pair(double &a, double &b);

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace phaseret
