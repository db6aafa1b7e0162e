#include "phaseret/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

#include "phaseret/gerchberg_saxton.hpp"
#include "phaseret/metrics.hpp"
#include "phaseret/rng.hpp"
#include "phaseret/synth.hpp"
#include "phaseret/vbem.hpp"

namespace phaseret::bench {

namespace {

constexpr int kGsIterations = 3000;

// Harness-side solver settings for prVBEM. The noise floor is raised above
// the library default: the annealing tail walks sigma_n2_hat down
// geometrically, and every extra decade between the signal scale and the
// floor costs a fixed number of iterations without changing the estimate.
constexpr double kHarnessNoiseFloor = 1e-8;

struct WorkUnit {
    int alpha_idx = 0;
    int noise_idx = 0;
    int trial = 0;
};

TrialResult run_prvbem(const MeasurementEnsemble &e, const CVector &x_true,
                       std::uint64_t child_seed) {
    ModelParams params;
    params.estimate_noise = true;
    params.estimate_signal_var = false;
    const double mean_y2 = e.y.squaredNorm() / static_cast<double>(e.rows());
    params.sigma_x2 = std::max(
        static_cast<double>(e.rows()) / static_cast<double>(e.cols()) *
            mean_y2,
        std::numeric_limits<double>::min());
    vbem::SolverConfig cfg;
    cfg.sigma_n2_floor = kHarnessNoiseFloor;
    cfg.seed = derive_seed(child_seed, {10});

    TrialResult row;
    row.algo = "prvbem";
    const auto t0 = std::chrono::steady_clock::now();
    const vbem::SolveResult res = vbem::solve(e, params, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    row.correlation = recovery_correlation(res.x_hat, x_true);
    row.iterations = res.iterations;
    row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.sigma_n2_hat = res.state.sigma_n2_hat;
    return row;
}

TrialResult run_gs(const MeasurementEnsemble &e, const CVector &x_true,
                   std::uint64_t child_seed) {
    TrialResult row;
    row.algo = "gs";
    const auto t0 = std::chrono::steady_clock::now();
    const gs::GsResult res =
        gs::gs_solve(e, kGsIterations, derive_seed(child_seed, {9}));
    const auto t1 = std::chrono::steady_clock::now();
    row.correlation = recovery_correlation(res.x_hat, x_true);
    row.iterations = res.iterations;
    row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.sigma_n2_hat = std::numeric_limits<double>::quiet_NaN();
    return row;
}

}  // namespace

int rows_for_alpha(double alpha, int n) {
    return static_cast<int>(std::llround(alpha * static_cast<double>(n)));
}

void validate(const ExperimentConfig &config) {
    if (config.n < 1)
        throw std::invalid_argument("bench config: n must be >= 1");
    if (config.alphas.empty())
        throw std::invalid_argument("bench config: alphas must be nonempty");
    for (double a : config.alphas) {
        if (!std::isfinite(a) || a <= 0.0)
            throw std::invalid_argument(
                "bench config: every alpha must be a positive finite ratio");
        if (rows_for_alpha(a, config.n) < 1)
            throw std::invalid_argument(
                "bench config: alpha * n rounds below one measurement row");
    }
    if (config.sigma_n2_list.empty())
        throw std::invalid_argument(
            "bench config: sigma_n2 list must be nonempty");
    for (double s : config.sigma_n2_list)
        if (!std::isfinite(s) || s < 0.0)
            throw std::invalid_argument(
                "bench config: every sigma_n2 must be finite and >= 0");
    if (!std::isfinite(config.sigma_x2) || config.sigma_x2 <= 0.0)
        throw std::invalid_argument("bench config: sigma_x2 must be positive");
    if (config.trials < 1)
        throw std::invalid_argument("bench config: trials must be >= 1");
    if (config.algos.empty())
        throw std::invalid_argument("bench config: algos must be nonempty");
    std::set<std::string> seen;
    for (const std::string &a : config.algos) {
        if (a != "prvbem" && a != "gs")
            throw std::invalid_argument("bench config: unknown algo '" + a +
                                        "' (expected prvbem or gs)");
        if (!seen.insert(a).second)
            throw std::invalid_argument("bench config: algo '" + a +
                                        "' listed twice");
    }
    if (config.workers < 1)
        throw std::invalid_argument("bench config: workers must be >= 1");
}

std::vector<TrialResult> run_experiment(const ExperimentConfig &config) {
    validate(config);

    std::vector<WorkUnit> units;
    units.reserve(config.alphas.size() * config.sigma_n2_list.size() *
                  static_cast<std::size_t>(config.trials));
    for (int ai = 0; ai < static_cast<int>(config.alphas.size()); ++ai)
        for (int si = 0; si < static_cast<int>(config.sigma_n2_list.size());
             ++si)
            for (int tr = 0; tr < config.trials; ++tr)
                units.push_back({ai, si, tr});

    const std::size_t algos_per_unit = config.algos.size();
    std::vector<TrialResult> results(units.size() * algos_per_unit);

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t u = next.fetch_add(1);
            if (u >= units.size()) return;
            const WorkUnit &unit = units[u];
            const double alpha = config.alphas[unit.alpha_idx];
            const double sigma_n2 = config.sigma_n2_list[unit.noise_idx];
            const int m_rows = rows_for_alpha(alpha, config.n);
            const std::uint64_t child = derive_seed(
                config.master_seed,
                {static_cast<std::uint64_t>(unit.alpha_idx),
                 static_cast<std::uint64_t>(unit.noise_idx),
                 static_cast<std::uint64_t>(unit.trial)});

            const CMatrix d =
                gen_matrix(m_rows, config.n, derive_seed(child, {1}));
            const CVector x =
                gen_signal(config.n, config.sigma_x2, derive_seed(child, {2}));
            const Observations obs =
                gen_observations(d, x, sigma_n2, derive_seed(child, {3}));
            const MeasurementEnsemble e = make_ensemble(d, obs.y);

            for (std::size_t k = 0; k < algos_per_unit; ++k) {
                TrialResult row = config.algos[k] == "prvbem"
                                      ? run_prvbem(e, x, child)
                                      : run_gs(e, x, child);
                row.n = config.n;
                row.m = m_rows;
                row.sigma_n2 = sigma_n2;
                row.trial = unit.trial;
                row.seed = child;
                results[u * algos_per_unit + k] = std::move(row);
            }
        }
    };

    const int thread_count = std::min<int>(
        config.workers, static_cast<int>(units.size()));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread &t : pool) t.join();
    }
    return results;
}

std::vector<std::string> emit_curve(const std::vector<TrialResult> &results,
                                    const std::string &path) {
    if (results.empty())
        throw std::invalid_argument("emit_curve: no results to aggregate");

    // (algo, sigma_n2) -> ratio -> accumulated (correlation, runtime, count).
    struct CellSum {
        double corr = 0.0;
        double runtime = 0.0;
        int count = 0;
    };
    std::map<std::pair<std::string, double>, std::map<double, CellSum>> groups;
    for (const TrialResult &r : results) {
        if (r.n <= 0)
            throw std::invalid_argument(
                "emit_curve: result row with nonpositive n");
        const double ratio =
            static_cast<double>(r.m) / static_cast<double>(r.n);
        CellSum &cell = groups[{r.algo, r.sigma_n2}][ratio];
        cell.corr += r.correlation;
        cell.runtime += r.runtime_ms;
        ++cell.count;
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("emit_curve: cannot open '" + path +
                                 "' for writing");

    std::vector<std::string> notes;
    char buf[128];
    const auto write_section = [&](const char *title, bool correlation) {
        out << "# " << title << " vs M/N\n";
        for (const auto &[key, curve] : groups) {
            std::snprintf(buf, sizeof buf, "%.17g", key.second);
            out << "# algo=" << key.first << " sigma_n2=" << buf << "\n";
            double prev = -1.0;
            double prev_ratio = 0.0;
            for (const auto &[ratio, cell] : curve) {
                const double mean =
                    (correlation ? cell.corr : cell.runtime) / cell.count;
                std::snprintf(buf, sizeof buf, "%.17g %.17g", ratio, mean);
                out << buf << "\n";
                if (correlation && key.first == "prvbem" &&
                    key.second == 0.0 && prev >= 0.0 && mean < prev - 1e-12) {
                    std::snprintf(buf, sizeof buf,
                                  "mean correlation dips from %.4f (M/N=%g) "
                                  "to %.4f (M/N=%g)",
                                  prev, prev_ratio, mean, ratio);
                    notes.push_back(std::string("prvbem noiseless curve: ") +
                                    buf);
                }
                prev = mean;
                prev_ratio = ratio;
            }
            out << "\n";
        }
    };
    write_section("mean correlation", true);
    write_section("mean runtime_ms", false);
    out.flush();
    if (!out)
        throw std::runtime_error("emit_curve: write to '" + path +
                                 "' failed");
    return notes;
}

}  // namespace phaseret::bench
