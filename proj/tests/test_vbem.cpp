#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "phaseret/metrics.hpp"
#include "phaseret/rng.hpp"
#include "phaseret/synth.hpp"
#include "phaseret/vbem.hpp"

using namespace phaseret;
using vbem::SolverConfig;

namespace {

struct Instance {
    MeasurementEnsemble ensemble;
    CVector x_true;
    Observations obs;
};

Instance make_instance(Eigen::Index m, Eigen::Index n, double sigma_n2,
                       std::uint64_t seed) {
    Instance inst;
    const CMatrix d = gen_matrix(m, n, derive_seed(seed, {1}));
    inst.x_true = gen_signal(n, 1.0, derive_seed(seed, {2}));
    inst.obs = gen_observations(d, inst.x_true, sigma_n2,
                                derive_seed(seed, {3}));
    inst.ensemble = make_ensemble(d, inst.obs.y);
    return inst;
}

// E[e^{j theta}] and E[log q(theta)] for the density proportional to
// exp(kappa cos(theta + phi)), by periodic trapezoid quadrature.
struct PhaseQuad {
    std::complex<double> mean_exp;  // E[e^{j theta}]
    double entropy_neg;             // E[log q(theta)]
};

PhaseQuad phase_quadrature(double kappa, double phi, int nodes = 100000) {
    const double h = 2.0 * M_PI / nodes;
    long double den = 0.0L, num_re = 0.0L, num_im = 0.0L, ent = 0.0L;
    for (int k = 0; k < nodes; ++k) {
        const double th = k * h;
        const double w = std::exp(kappa * std::cos(th + phi));
        den += w;
        num_re += w * std::cos(th);
        num_im += w * std::sin(th);
        ent += w * kappa * std::cos(th + phi);
    }
    const double z = static_cast<double>(den) * h;  // normalizer
    PhaseQuad out;
    out.mean_exp = {static_cast<double>(num_re / den),
                    static_cast<double>(num_im / den)};
    out.entropy_neg = static_cast<double>(ent / den) - std::log(z);
    return out;
}

}  // namespace

TEST_CASE("initial state: schemes, determinism, degenerate data") {
    const Instance inst = make_instance(24, 8, 0.0, 100);
    ModelParams params;
    SolverConfig cfg;
    cfg.seed = 9;

    SUBCASE("zero-mean start is the documented fixed point") {
        SolverConfig zc = cfg;
        zc.init_scheme = SolverConfig::Init::zero_mean;
        const PosteriorState st = vbem::init_state(inst.ensemble, params, zc);
        CHECK(st.m.norm() == 0.0);
        CHECK(st.z_mean.norm() == 0.0);
        CHECK(st.y_bar.norm() == 0.0);
        const double power =
            inst.ensemble.y.squaredNorm() / inst.ensemble.rows();
        CHECK(st.sigma_n2_hat == doctest::Approx(power).epsilon(1e-15));
        for (Eigen::Index i = 0; i < 8; ++i) {
            const double ei = inst.ensemble.column_energies[i];
            const double expect = st.sigma_n2_hat * 1.0 /
                                  (st.sigma_n2_hat + 1.0 * ei);
            CHECK(st.sigma[i] == doctest::Approx(expect).epsilon(1e-14));
        }
    }

    SUBCASE("random start is seed-deterministic") {
        const PosteriorState a = vbem::init_state(inst.ensemble, params, cfg);
        const PosteriorState b = vbem::init_state(inst.ensemble, params, cfg);
        CHECK((a.m.array() == b.m.array()).all());
        CHECK(a.free_energy == b.free_energy);
        SolverConfig other = cfg;
        other.seed = 10;
        const PosteriorState c =
            vbem::init_state(inst.ensemble, params, other);
        CHECK_FALSE((a.m.array() == c.m.array()).all());
    }

    SUBCASE("all-zero observations clamp the noise estimate to the floor") {
        const CMatrix d = gen_matrix(6, 3, 4);
        const MeasurementEnsemble e = make_ensemble(d, RVector::Zero(6));
        const PosteriorState st = vbem::init_state(e, params, cfg);
        CHECK(st.sigma_n2_hat == cfg.sigma_n2_floor);
        CHECK(st.sigma_n2_floor == cfg.sigma_n2_floor);
    }

    SUBCASE("invalid configurations are rejected") {
        SolverConfig bad = cfg;
        bad.max_iters = 0;
        CHECK_THROWS_AS(vbem::init_state(inst.ensemble, params, bad),
                        std::invalid_argument);
        bad = cfg;
        bad.kl_tol = 0.0;
        CHECK_THROWS_AS(vbem::init_state(inst.ensemble, params, bad),
                        std::invalid_argument);
        bad = cfg;
        bad.restarts = 0;
        CHECK_THROWS_AS(vbem::init_state(inst.ensemble, params, bad),
                        std::invalid_argument);
        ModelParams bp = params;
        bp.sigma_x2 = 0.0;
        CHECK_THROWS_AS(vbem::init_state(inst.ensemble, bp, cfg),
                        std::invalid_argument);
        bp = params;
        bp.sigma_n2 = -0.1;
        CHECK_THROWS_AS(vbem::init_state(inst.ensemble, bp, cfg),
                        std::invalid_argument);
    }
}

TEST_CASE("phase statistics: degenerate, saturated, and quadrature-checked") {
    SUBCASE("zero prediction gives a uniform phase posterior") {
        const Instance inst = make_instance(10, 4, 0.0, 200);
        ModelParams params;
        SolverConfig cfg;
        cfg.init_scheme = SolverConfig::Init::zero_mean;
        PosteriorState st = vbem::init_state(inst.ensemble, params, cfg);
        vbem::update_phase_stats(st, inst.ensemble);
        for (Eigen::Index mu = 0; mu < 10; ++mu) {
            CHECK(st.y_bar[mu] == cplx(0.0, 0.0));
            CHECK(st.phase[mu].concentration.value() == 0.0);
            CHECK(st.phase[mu].resultant == 0.0);
            CHECK(st.resultant_complement[mu] == 1.0);
        }
    }

    SUBCASE("tiny noise locks the phase") {
        CMatrix d(2, 1);
        d << cplx(1, 0), cplx(0, 1);
        RVector y(2);
        y << 1.5, 2.0;
        const MeasurementEnsemble e = make_ensemble(d, y);
        ModelParams params;
        SolverConfig cfg;
        PosteriorState st = vbem::init_state(e, params, cfg);
        st.z_mean[0] = cplx(0.6, -0.8);
        st.z_mean[1] = cplx(-1.0, 0.5);
        st.sigma_n2_hat = 1e-10;
        vbem::update_phase_stats(st, e);
        for (Eigen::Index mu = 0; mu < 2; ++mu) {
            CHECK(std::abs(st.y_bar[mu]) <= e.y[mu]);
            CHECK(std::abs(st.y_bar[mu]) >= e.y[mu] * (1.0 - 1e-9));
            // Phase locks to the prediction's direction.
            const cplx dir = st.y_bar[mu] / st.z_mean[mu];
            CHECK(std::abs(std::arg(dir)) < 1e-9);
        }
    }

    SUBCASE("effective observation matches von Mises quadrature") {
        // One measurement: y = 2, prediction 1 + 0j, noise variance 1, so
        // kappa = 4 and y_bar = 2 * I1/I0(4) on the real axis.
        CMatrix d(1, 1);
        d << cplx(1, 0);
        RVector y(1);
        y << 2.0;
        const MeasurementEnsemble e = make_ensemble(d, y);
        ModelParams params;
        params.estimate_noise = false;
        params.sigma_n2 = 1.0;
        SolverConfig cfg;
        PosteriorState st = vbem::init_state(e, params, cfg);
        st.z_mean[0] = cplx(1.0, 0.0);
        st.sigma_n2_hat = 1.0;
        vbem::update_phase_stats(st, e);

        CHECK(st.phase[0].concentration.value() ==
              doctest::Approx(4.0).epsilon(1e-15));
        // Quadrature over the posterior density exp(kappa cos(theta+phi)):
        // y_bar = y * conj(E[e^{j theta}]).
        const PhaseQuad q = phase_quadrature(4.0, st.phase[0].mean_direction);
        const cplx expect = 2.0 * std::conj(q.mean_exp);
        CHECK(std::abs(st.y_bar[0] - expect) < 1e-9);
        // Independent frozen digits for I1/I0 at kappa = 4.
        CHECK(std::abs(st.y_bar[0] - cplx(2.0 * 0.8635226110245506, 0.0)) <
              1e-9);

        // A rotated, scaled variant: y = 1.5, prediction e^{j 1.1}, noise
        // variance 0.7.
        RVector y2(1);
        y2 << 1.5;
        const MeasurementEnsemble e2 = make_ensemble(d, y2);
        PosteriorState st2 = vbem::init_state(e2, params, cfg);
        st2.z_mean[0] = cplx(std::cos(1.1), std::sin(1.1));
        st2.sigma_n2_hat = 0.7;
        vbem::update_phase_stats(st2, e2);
        const double kappa = 2.0 * 1.5 / 0.7;
        CHECK(st2.phase[0].concentration.value() ==
              doctest::Approx(kappa).epsilon(1e-12));
        const PhaseQuad q2 =
            phase_quadrature(kappa, st2.phase[0].mean_direction);
        const cplx expect2 = 1.5 * std::conj(q2.mean_exp);
        CHECK(std::abs(st2.y_bar[0] - expect2) < 1e-9);
    }
}

TEST_CASE("coefficient sweep: variance limits") {
    SUBCASE("overwhelming noise shrinks means to zero") {
        const Instance inst = make_instance(12, 6, 0.0, 300);
        ModelParams params;
        SolverConfig cfg;
        PosteriorState st = vbem::init_state(inst.ensemble, params, cfg);
        st.sigma_n2_hat = 1e12;
        st.sigma_x2_hat = 1.0;
        vbem::update_phase_stats(st, inst.ensemble);
        vbem::sweep_coefficients(st, inst.ensemble);
        for (Eigen::Index i = 0; i < 6; ++i) {
            CHECK(std::abs(st.m[i]) < 1e-9);
            CHECK(std::abs(st.sigma[i] - 1.0) < 1e-10);
        }
    }

    SUBCASE("overwhelming prior gives the least-squares coordinate") {
        // Single column: the update must approach d^H y_bar / ||d||^2.
        const CMatrix d = gen_matrix(9, 1, 301);
        RVector y(9);
        for (int mu = 0; mu < 9; ++mu)
            y[mu] = 0.5 + 0.1 * mu;
        const MeasurementEnsemble e = make_ensemble(d, y);
        ModelParams params;
        SolverConfig cfg;
        PosteriorState st = vbem::init_state(e, params, cfg);
        st.sigma_x2_hat = 1e12;
        st.sigma_n2_hat = 1.0;
        // Pin an arbitrary effective observation and sweep once.
        for (Eigen::Index mu = 0; mu < 9; ++mu)
            st.y_bar[mu] = cplx(0.3 * mu - 1.0, 0.2 * (4 - mu));
        vbem::sweep_coefficients(st, e);
        const double e0 = e.column_energies[0];
        const cplx ls = e.d.col(0).dot(st.y_bar) / e0;
        CHECK(std::abs(st.m[0] - ls) <= 1e-9 * std::abs(ls));
        CHECK(std::abs(st.sigma[0] - 1.0 / e0) <= 1e-10 / e0);
    }
}

TEST_CASE("known-phase reduction: sweeps converge to the ridge solution") {
    const Instance inst = make_instance(32, 16, 0.0, 400);
    const MeasurementEnsemble &e = inst.ensemble;
    const double sn = 0.25, sx = 1.0;

    // Pin y_bar to the true complex measurements (no shrinkage at all) and
    // iterate only coefficient sweeps.
    PosteriorState st;
    st.sigma_n2_hat = sn;
    st.sigma_x2_hat = sx;
    st.sigma_n2_floor = 1e-12;
    st.m = CVector::Zero(16);
    st.sigma = RVector::Zero(16);
    st.z_mean = CVector::Zero(32);
    st.y_bar = e.d * inst.x_true;  // noiseless: y_mu e^{-j theta_mu} = z_mu
    st.residual = st.y_bar;

    CVector prev = st.m;
    for (int sweep = 0; sweep < 5000; ++sweep) {
        vbem::sweep_coefficients(st, e);
        if ((st.m - prev).lpNorm<Eigen::Infinity>() < 1e-13)
            break;
        prev = st.m;
    }

    // Dense ridge oracle: (sn/sx I + D^H D) m = D^H y_bar.
    const CMatrix a = (sn / sx) * CMatrix::Identity(16, 16) +
                      e.d.adjoint() * e.d;
    const CVector b = e.d.adjoint() * st.y_bar;
    const CVector ridge = a.ldlt().solve(b);
    CHECK((st.m - ridge).norm() <= 1e-6 * ridge.norm());
}

TEST_CASE("noise update: closed forms and Monte-Carlo oracle") {
    SUBCASE("all mass at zero means the raw average power") {
        const Instance inst = make_instance(14, 5, 0.3, 500);
        ModelParams params;
        SolverConfig cfg;
        cfg.init_scheme = SolverConfig::Init::zero_mean;
        PosteriorState st = vbem::init_state(inst.ensemble, params, cfg);
        st.sigma.setZero();  // hypothetical: no posterior variance at all
        const double got = vbem::estimate_noise_variance(st, inst.ensemble);
        const double expect = inst.ensemble.y.squaredNorm() / 14.0;
        CHECK(got == doctest::Approx(expect).epsilon(1e-14));
    }

    SUBCASE("an exact fit clamps to the floor") {
        const CMatrix d = gen_matrix(6, 2, 501);
        RVector y(6);
        for (int mu = 0; mu < 6; ++mu)
            y[mu] = 0.4 + 0.2 * mu;
        const MeasurementEnsemble e = make_ensemble(d, y);
        PosteriorState st;
        st.sigma_n2_floor = 3e-11;
        st.sigma_n2_hat = 0.5;
        st.sigma_x2_hat = 1.0;
        st.m = CVector::Zero(2);
        st.sigma = RVector::Zero(2);
        st.z_mean.resize(6);
        st.y_bar.resize(6);
        st.resultant_complement = RVector::Zero(6);  // fully locked phases
        st.log_i0_scaled = RVector::Zero(6);
        st.phase.assign(6, VonMisesStats{});
        for (Eigen::Index mu = 0; mu < 6; ++mu) {
            const double ang = 0.9 * mu - 2.0;
            st.z_mean[mu] = y[mu] * cplx(std::cos(ang), std::sin(ang));
            st.y_bar[mu] = st.z_mean[mu];
        }
        st.residual = CVector::Zero(6);
        const double got = vbem::estimate_noise_variance(st, e);
        CHECK(got == 3e-11);
    }

    SUBCASE("matches the sampled expected misfit within 3 standard errors") {
        const Instance inst = make_instance(8, 4, 0.4, 502);
        const MeasurementEnsemble &e = inst.ensemble;
        ModelParams params;
        params.estimate_noise = false;
        params.estimate_signal_var = false;
        params.sigma_n2 = 0.4;
        SolverConfig cfg;
        cfg.seed = 77;
        PosteriorState st = vbem::init_state(e, params, cfg);
        for (int t = 0; t < 2; ++t) {
            vbem::update_phase_stats(st, e);
            vbem::sweep_coefficients(st, e);
        }
        const double raw = vbem::expected_misfit(st, e) / 8.0;

        RandomStream rng(90210);
        auto u01 = [&rng] { return rng.uniform01(); };
        const int samples = 1000000;
        std::vector<double> vals(samples);
        CVector xs(4);
        CVector zs(8);
        for (int s = 0; s < samples; ++s) {
            for (Eigen::Index i = 0; i < 4; ++i)
                xs[i] = st.m[i] + rng.complex_gaussian(st.sigma[i]);
            zs.noalias() = e.d * xs;
            double acc = 0.0;
            for (Eigen::Index mu = 0; mu < 8; ++mu) {
                const auto &vm = st.phase[mu];
                const double th = oracle::sample_von_mises(
                    u01, -vm.mean_direction, vm.concentration.value());
                const cplx lhs =
                    e.y[mu] * cplx(std::cos(-th), std::sin(-th));
                acc += std::norm(lhs - zs[mu]);
            }
            vals[s] = acc / 8.0;
        }
        const auto ms = oracle::mean_se(vals);
        CHECK(std::abs(raw - ms.mean) < 3.0 * ms.se);
    }
}

TEST_CASE("signal-variance update") {
    SUBCASE("pure-variance and single-coefficient arithmetic") {
        PosteriorState st;
        st.m = CVector::Zero(5);
        st.sigma = RVector::Constant(5, 0.37);
        CHECK(vbem::estimate_signal_variance(st) ==
              doctest::Approx(0.37).epsilon(1e-15));

        PosteriorState one;
        one.m = CVector::Constant(1, cplx(2.0, 0.0));
        one.sigma = RVector::Constant(1, 0.5);
        CHECK(vbem::estimate_signal_variance(one) == 4.5);
    }

    SUBCASE("matches a grid search of the prior-fit objective") {
        const Instance inst = make_instance(20, 10, 0.3, 600);
        ModelParams params;
        SolverConfig cfg;
        PosteriorState st = vbem::init_state(inst.ensemble, params, cfg);
        for (int t = 0; t < 3; ++t) {
            vbem::update_phase_stats(st, inst.ensemble);
            vbem::sweep_coefficients(st, inst.ensemble);
        }
        const double est = vbem::estimate_signal_variance(st);

        // Objective: N log(pi s) + (sum |m|^2 + sigma) / s.
        const double t_sum = st.m.squaredNorm() + st.sigma.sum();
        const double n = 10.0;
        double best_s = 0.0, best_f = 0.0;
        bool first = true;
        for (int k = 0; k <= 40000; ++k) {
            const double s =
                (t_sum / n) * std::pow(10.0, -2.0 + 4.0 * k / 40000.0);
            const double f = n * std::log(M_PI * s) + t_sum / s;
            if (first || f < best_f) {
                best_f = f;
                best_s = s;
                first = false;
            }
        }
        CHECK(std::abs(est - best_s) <= 5e-4 * best_s);
    }
}

TEST_CASE("free energy: entropy term, oracle, monotonicity") {
    SUBCASE("doubling posterior variances shifts the entropy term") {
        const Instance inst = make_instance(16, 6, 0.3, 700);
        ModelParams params;
        SolverConfig cfg;
        PosteriorState st = vbem::init_state(inst.ensemble, params, cfg);
        const auto before = vbem::free_energy_terms(st, inst.ensemble);
        st.sigma *= 2.0;
        const auto after = vbem::free_energy_terms(st, inst.ensemble);
        CHECK(std::abs((after.gauss_entropy - before.gauss_entropy) -
                       (-6.0 * std::log(2.0))) < 1e-10);
    }

    SUBCASE("matches quadrature plus Monte-Carlo on a tiny instance") {
        const Instance inst = make_instance(4, 2, 0.5, 701);
        const MeasurementEnsemble &e = inst.ensemble;
        ModelParams params;
        params.estimate_noise = false;
        params.estimate_signal_var = false;
        params.sigma_n2 = 0.5;
        SolverConfig cfg;
        cfg.seed = 11;
        PosteriorState st = vbem::init_state(e, params, cfg);
        for (int t = 0; t < 2; ++t) {
            vbem::update_phase_stats(st, e);
            vbem::sweep_coefficients(st, e);
        }
        const double f_impl = vbem::free_energy(st, e);
        const auto terms = vbem::free_energy_terms(st, e);
        const double sn = st.sigma_n2_hat;
        const double sx = st.sigma_x2_hat;

        // Deterministic theta part by quadrature: E[log q] - E[log p].
        double theta_part = 0.0;
        std::vector<cplx> mean_exp(4);
        for (Eigen::Index mu = 0; mu < 4; ++mu) {
            const auto &vm = st.phase[mu];
            const PhaseQuad q = phase_quadrature(vm.concentration.value(),
                                                 vm.mean_direction);
            mean_exp[mu] = q.mean_exp;
            theta_part += q.entropy_neg + std::log(2.0 * M_PI);
        }
        CHECK(std::abs(terms.phase - theta_part) < 1e-7);

        // Monte-Carlo over q(x) for everything that depends on x.
        RandomStream rng(314159);
        const int samples = 400000;
        std::vector<double> vals(samples);
        CVector xs(2);
        CVector zs(4);
        for (int s = 0; s < samples; ++s) {
            double v = 0.0;
            for (Eigen::Index i = 0; i < 2; ++i) {
                xs[i] = st.m[i] + rng.complex_gaussian(st.sigma[i]);
                const double lq = -std::log(M_PI * st.sigma[i]) -
                                  std::norm(xs[i] - st.m[i]) / st.sigma[i];
                const double lp =
                    -std::log(M_PI * sx) - std::norm(xs[i]) / sx;
                v += lq - lp;
            }
            zs.noalias() = e.d * xs;
            double misfit = 0.0;
            for (Eigen::Index mu = 0; mu < 4; ++mu) {
                misfit += e.y[mu] * e.y[mu] -
                          2.0 * e.y[mu] *
                              (zs[mu] * mean_exp[mu]).real() +
                          std::norm(zs[mu]);
            }
            v += 4.0 * std::log(M_PI * sn) + misfit / sn;
            vals[s] = v;
        }
        const auto ms = oracle::mean_se(vals);
        const double f_oracle = theta_part + ms.mean;
        CHECK(std::abs(f_impl - f_oracle) < 3.0 * ms.se + 1e-6);
    }

    SUBCASE("trace is nonincreasing across representative cells") {
        for (const auto &[alpha, s2] :
             std::vector<std::pair<int, double>>{
                 {1, 0.0}, {3, 0.0}, {6, 0.0}, {2, 0.3}, {4, 0.7}}) {
            CAPTURE(alpha);
            CAPTURE(s2);
            const Instance inst =
                make_instance(24 * alpha, 24, s2, 800 + alpha);
            ModelParams params;
            SolverConfig cfg;
            cfg.seed = 5 + alpha;
            const auto res = vbem::solve(inst.ensemble, params, cfg);
            for (std::size_t t = 1; t < res.fe_trace.size(); ++t)
                CHECK(res.fe_trace[t] <= res.fe_trace[t - 1] + 1e-9);
        }
    }
}

TEST_CASE("solver loop: fixed point, determinism, restarts, degenerate y") {
    SUBCASE("converged states are fixed points") {
        const Instance inst = make_instance(64, 16, 0.0, 900);
        ModelParams params;
        SolverConfig cfg;
        cfg.kl_tol = 1e-12;
        cfg.max_iters = 5000;
        cfg.seed = 3;
        auto res = vbem::solve(inst.ensemble, params, cfg);
        PosteriorState st = res.state;
        const CVector m_before = st.m;
        vbem::update_phase_stats(st, inst.ensemble);
        vbem::sweep_coefficients(st, inst.ensemble);
        vbem::estimate_noise_variance(st, inst.ensemble);
        vbem::estimate_signal_variance(st);
        CHECK((st.m - m_before).lpNorm<Eigen::Infinity>() < 1e-6);
    }

    SUBCASE("bit-identical reruns") {
        const Instance inst = make_instance(48, 12, 0.3, 901);
        ModelParams params;
        SolverConfig cfg;
        cfg.seed = 31;
        const auto a = vbem::solve(inst.ensemble, params, cfg);
        const auto b = vbem::solve(inst.ensemble, params, cfg);
        CHECK((a.x_hat.array() == b.x_hat.array()).all());
        CHECK(a.iterations == b.iterations);
        REQUIRE(a.fe_trace.size() == b.fe_trace.size());
        for (std::size_t t = 0; t < a.fe_trace.size(); ++t)
            CHECK(a.fe_trace[t] == b.fe_trace[t]);
    }

    SUBCASE("restarts keep the lowest free energy") {
        const Instance inst = make_instance(32, 16, 0.0, 902);
        ModelParams params;
        SolverConfig cfg;
        cfg.seed = 8;
        const auto single = vbem::solve(inst.ensemble, params, cfg);
        SolverConfig multi = cfg;
        multi.restarts = 3;
        const auto best = vbem::solve(inst.ensemble, params, multi);
        CHECK(best.state.free_energy <=
              single.state.free_energy + 1e-9);
        const auto again = vbem::solve(inst.ensemble, params, multi);
        CHECK((best.x_hat.array() == again.x_hat.array()).all());
    }

    SUBCASE("zero observations give a zero estimate") {
        const CMatrix d = gen_matrix(16, 8, 903);
        const MeasurementEnsemble e = make_ensemble(d, RVector::Zero(16));
        ModelParams params;
        SolverConfig cfg;
        cfg.init_scheme = SolverConfig::Init::zero_mean;
        const auto zres = vbem::solve(e, params, cfg);
        CHECK(zres.x_hat.norm() == 0.0);

        SolverConfig rg = cfg;
        rg.init_scheme = SolverConfig::Init::random_gaussian;
        rg.seed = 5;
        const auto rres = vbem::solve(e, params, rg);
        CHECK(rres.x_hat.norm() < 1e-3);
    }
}

TEST_CASE("in-loop invariants: shrinkage, bounded y_bar, descent") {
    const Instance inst = make_instance(60, 20, 0.3, 950);
    const MeasurementEnsemble &e = inst.ensemble;
    ModelParams params;
    SolverConfig cfg;
    cfg.seed = 17;
    PosteriorState st = vbem::init_state(e, params, cfg);
    double f_prev = st.free_energy;
    for (int t = 0; t < 30; ++t) {
        vbem::update_phase_stats(st, e);
        vbem::sweep_coefficients(st, e);
        for (Eigen::Index i = 0; i < e.cols(); ++i) {
            CHECK(st.sigma[i] > 0.0);
            CHECK(st.sigma[i] <= st.sigma_x2_hat);
        }
        for (Eigen::Index mu = 0; mu < e.rows(); ++mu)
            CHECK(std::abs(st.y_bar[mu]) <= e.y[mu]);
        const double raw = vbem::expected_misfit(st, e) / e.rows();
        CHECK(raw >= -1e-12 * (e.y.squaredNorm() / e.rows()));
        vbem::estimate_noise_variance(st, e);
        vbem::estimate_signal_variance(st);
        const double f = vbem::free_energy(st, e);
        CHECK(f <= f_prev + 1e-9);
        f_prev = f;
    }
}

TEST_CASE("recovery on an easy instance") {
    const Instance inst = make_instance(320, 64, 0.0, 960);
    ModelParams params;
    SolverConfig cfg;
    cfg.seed = 12;
    const auto res = vbem::solve(inst.ensemble, params, cfg);
    CHECK(recovery_correlation(res.x_hat, inst.x_true) >= 0.9);
    CHECK(res.iterations <= cfg.max_iters);
}
