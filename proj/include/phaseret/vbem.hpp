// Mean-field variational solver for modulus-only measurements y = |D x|.
//
// The posterior over (coefficients x, per-measurement phases theta) is
// approximated by a fully factorized distribution: a von Mises factor per
// phase and a complex Gaussian per coefficient. One iteration updates the
// phase factors, sweeps the coefficient factors sequentially, optionally
// re-estimates the noise and signal variances in closed form, and evaluates
// the variational free energy (the KL surrogate). Every block update is an
// exact coordinate minimizer of the free energy, so the free-energy trace
// is nonincreasing; iteration stops when the decrease falls below kl_tol.

#pragma once

#include <cstdint>
#include <vector>

#include "phaseret/model.hpp"

namespace phaseret::vbem {

struct SolverConfig {
    enum class Init { zero_mean, random_gaussian };

    int max_iters = 1000;
    double kl_tol = 1e-8;          // stop when F(t-1) - F(t) < kl_tol
    double sigma_n2_floor = 1e-12; // scaled by max(1, mean y^2) per instance
    int restarts = 1;
    Init init_scheme = Init::random_gaussian;
    std::uint64_t seed = 0;
};

// Builds a consistent starting state: means per init_scheme, variances from
// the coefficient update at the initial noise estimate, phase statistics,
// residual, and free energy. When estimate_noise is on the noise variance
// starts at mean(y^2) — deliberately large, which keeps early phase
// posteriors diffuse. Throws std::invalid_argument on invalid parameters.
PosteriorState init_state(const MeasurementEnsemble &ensemble,
                          const ModelParams &params,
                          const SolverConfig &config);

// Updates y_bar and the per-measurement circular statistics from z_mean:
// kappa = 2 |y_mu conj-weighted z_mean| / sigma_n2_hat, direction from
// y_mu * z_mean, and |y_bar_mu| = y_mu * I1/I0(kappa) <= y_mu. A zero
// product (y_mu = 0 or z_mean_mu = 0) gives a uniform phase posterior and
// y_bar_mu = 0. Does not touch the residual.
void update_phase_stats(PosteriorState &state,
                        const MeasurementEnsemble &ensemble);

// One sequential pass over all coefficients: for each i,
//   sigma[i] = sn * sx / (sn + sx * e_i),
//   m[i]     = sx / (sn + sx * e_i) * d_i^H r_i,
// where e_i = ||d_i||^2 and r_i is the residual with coefficient i added
// back. The residual is rebuilt as y_bar - z_mean on entry, maintained
// incrementally during the pass (O(M) per coefficient), and both z_mean
// and residual are refreshed exactly afterwards. The inner product is
// taken conjugated on the d_i side — the orientation whose fixed point is
// the ridge/MMSE solution.
void sweep_coefficients(PosteriorState &state,
                        const MeasurementEnsemble &ensemble);

// The expected squared data misfit E||y e^{-j theta} - D x||^2 under the
// current posterior, grouped as a sum of nonnegative pieces:
//   ||y_bar - z_mean||^2 + sum_mu y_mu^2 u_mu (2 - u_mu) + sum_i sigma_i e_i
// with u = 1 - I1/I0. This is M times the unclamped noise estimate.
double expected_misfit(const PosteriorState &state,
                       const MeasurementEnsemble &ensemble);

// Closed-form noise update: sigma_n2_hat = max(floor, expected_misfit / M).
// Returns the clamped value.
double estimate_noise_variance(PosteriorState &state,
                               const MeasurementEnsemble &ensemble);

// Closed-form signal-variance update: mean of |m_i|^2 + sigma_i.
double estimate_signal_variance(PosteriorState &state);

// Additive breakdown of the free energy; `total` is their sum.
struct FreeEnergyTerms {
    double phase;        // -sum_mu [kappa_mu u_mu + log(e^{-kappa} I0)]
    double gauss_entropy;// -sum_i log(pi e sigma_i)
    double signal_prior; // N log(pi sx2) + (1/sx2) sum_i (|m_i|^2 + sigma_i)
    double likelihood;   // M log(pi sn2) + expected_misfit / sn2
    double total;
};

FreeEnergyTerms free_energy_terms(const PosteriorState &state,
                                  const MeasurementEnsemble &ensemble);

// Evaluates the free energy, stores it in state.free_energy, returns it.
double free_energy(PosteriorState &state, const MeasurementEnsemble &ensemble);

struct SolveResult {
    CVector x_hat;
    PosteriorState state;
    int iterations = 0;             // full iterations run (selected restart)
    std::vector<double> fe_trace;   // free energy: initial value, then one
                                    // entry per iteration
};

// Full solver loop. With restarts > 1, runs independently seeded restarts
// and returns the one with the lowest final free energy. Non-convergence
// within max_iters is visible in `iterations`, never an error.
SolveResult solve(const MeasurementEnsemble &ensemble,
                  const ModelParams &params, const SolverConfig &config);

}  // namespace phaseret::vbem
