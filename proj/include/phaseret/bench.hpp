// Monte-Carlo benchmark harness: sweeps measurement ratios and noise levels,
// runs the selected solvers over repeated seeded trials on identical
// instances, and aggregates per-cell means into plot-ready curve files.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phaseret/model.hpp"

namespace phaseret::bench {

// Full experiment grid. Every (alpha, sigma_n2, trial) cell is one work
// unit; all selected algorithms run on the identical instance of that cell.
struct ExperimentConfig {
    int n = 64;
    std::vector<double> alphas = {1, 2, 3, 4, 5, 6};  // measurement ratios M/N
    std::vector<double> sigma_n2_list = {0.0, 0.3, 0.7};
    double sigma_x2 = 1.0;  // generation-side signal variance
    int trials = 100;
    std::vector<std::string> algos = {"prvbem", "gs"};
    std::uint64_t master_seed = 1;
    int workers = 1;
};

// Throws std::invalid_argument describing the first offending field.
// run_experiment calls this before doing any work.
void validate(const ExperimentConfig &config);

// Number of measurement rows for one ratio entry: alpha * n rounded to the
// nearest integer.
int rows_for_alpha(double alpha, int n);

// Runs the full grid. Child seeds are derived from (master_seed, alpha
// index, noise index, trial index), so results are independent of the
// worker count and of any other cell's presence. Rows come back in a fixed
// deterministic order (grid order, algorithms innermost); only runtime_ms
// varies between repeated runs.
//
// The solvers never see the generation-side sigma_x2 / sigma_n2. prVBEM
// runs with noise estimation on and the signal-prior variance fixed at the
// observable moment-matched guess (M/N) * mean(y^2); GS runs its default
// 3000 iterations. sigma_n2_hat is NaN on GS rows.
std::vector<TrialResult> run_experiment(const ExperimentConfig &config);

// Writes a two-section plot-data text file: mean correlation vs M/N, then
// mean runtime vs M/N, one block per (algorithm, sigma_n2) pair, means
// taken over the trials of each cell. Dips in a correlation curve that the
// surrounding protocol expects to be nondecreasing are reported on the
// returned list (one human-readable note per dip), never asserted.
// Throws std::invalid_argument on empty input, std::runtime_error on I/O
// failure.
std::vector<std::string> emit_curve(const std::vector<TrialResult> &results,
                                    const std::string &path);

}  // namespace phaseret::bench
