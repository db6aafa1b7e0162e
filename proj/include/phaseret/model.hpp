// Core domain types shared by the solvers, the instance generators, and the
// benchmark harness: model hyperparameters, the measurement ensemble, the
// planted ground truth, and the variational posterior state.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phaseret/bessel.hpp"

namespace phaseret {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Prior/noise hyperparameters and which of them the solver re-estimates.
// Noise estimation defaults on: the annealing it provides is what pulls the
// solver away from poor stationary points. Signal-variance estimation
// defaults off: its exact coordinate update turns the all-zero posterior
// into a strong attractor (the estimate and the posterior means shrink each
// other in a feedback loop), so it is an opt-in mode.
struct ModelParams {
    double sigma_x2 = 1.0;            // prior variance of each coefficient
    double sigma_n2 = 0.0;            // noise variance (0 = noiseless)
    bool estimate_noise = true;       // learn sigma_n2 from the data
    bool estimate_signal_var = false; // learn sigma_x2 from the data
};

// Dense sensing matrix, modulus observations, and cached column energies
// d_i^H d_i (reused by every coefficient update).
struct MeasurementEnsemble {
    CMatrix d;               // M x N
    RVector y;               // length M, nonnegative
    RVector column_energies; // length N, ||d_i||^2

    Eigen::Index rows() const { return d.rows(); }
    Eigen::Index cols() const { return d.cols(); }
};

// Validates dimensions, nonnegativity of y, and finiteness of all entries;
// precomputes column energies.
MeasurementEnsemble make_ensemble(CMatrix d, RVector y);

// The planted instance behind a set of observations.
struct GroundTruth {
    CVector x;            // planted coefficients
    RVector theta;        // planted phases, each in [0, 2pi)
    CVector noise;        // additive noise draws
    std::uint64_t seed;   // seed that produced this instance
};

// Circular posterior summary for one measurement: a von Mises distribution
// with the given mean direction and concentration; `resultant` caches
// I1(kappa)/I0(kappa).
struct VonMisesStats {
    double mean_direction = 0.0;               // in [0, 2pi)
    Concentration concentration{0.0};
    double resultant = 0.0;                    // in [0, 1)
};

// One benchmark run: which algorithm, on which cell of the experiment grid,
// with what outcome. sigma_n2_hat is NaN for algorithms that do not
// estimate the noise.
struct TrialResult {
    std::string algo;
    int n = 0;
    int m = 0;
    double sigma_n2 = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double correlation = 0.0;
    int iterations = 0;
    double runtime_ms = 0.0;
    double sigma_n2_hat = 0.0;
};

// Mean-field posterior over coefficients and phases, plus the running
// hyperparameter estimates and objective value.
struct PosteriorState {
    CVector m;            // posterior means, length N
    RVector sigma;        // posterior variances, length N, each in (0, sigma_x2]
    CVector z_mean;       // D * m, length M
    CVector y_bar;        // effective (phase-integrated) observations, length M
    CVector residual;     // y_bar - z_mean, length M
    double free_energy = 0.0;
    double sigma_n2_hat = 0.0;   // current noise-variance estimate
    double sigma_x2_hat = 0.0;   // current signal-variance estimate
    double sigma_n2_floor = 0.0; // effective lower clamp for sigma_n2_hat
    std::vector<VonMisesStats> phase; // per-measurement circular posteriors
    // Caches maintained alongside `phase`, in forms that stay accurate at
    // extreme concentrations: 1 - resultant, and log(e^{-kappa} I0(kappa)).
    RVector resultant_complement;
    RVector log_i0_scaled;
};

}  // namespace phaseret
