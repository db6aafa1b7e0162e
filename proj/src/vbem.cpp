#include "phaseret/vbem.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "phaseret/bessel.hpp"
#include "phaseret/rng.hpp"

namespace phaseret::vbem {

namespace {

void validate(const MeasurementEnsemble &e, const ModelParams &p,
              const SolverConfig &c) {
    if (e.rows() < 1 || e.cols() < 1)
        throw std::invalid_argument("vbem: empty ensemble");
    if (!(p.sigma_x2 > 0.0) || !std::isfinite(p.sigma_x2))
        throw std::invalid_argument("vbem: sigma_x2 must be positive");
    if (p.sigma_n2 < 0.0 || !std::isfinite(p.sigma_n2))
        throw std::invalid_argument("vbem: sigma_n2 must be nonnegative");
    if (c.max_iters < 1)
        throw std::invalid_argument("vbem: max_iters must be >= 1");
    if (!(c.kl_tol > 0.0))
        throw std::invalid_argument("vbem: kl_tol must be positive");
    if (!(c.sigma_n2_floor > 0.0))
        throw std::invalid_argument("vbem: sigma_n2_floor must be positive");
    if (c.restarts < 1)
        throw std::invalid_argument("vbem: restarts must be >= 1");
}

double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    double w = std::fmod(a, two_pi);
    if (w < 0.0)
        w += two_pi;
    if (w >= two_pi)
        w = 0.0;
    return w;
}

}  // namespace

void update_phase_stats(PosteriorState &st, const MeasurementEnsemble &e) {
    const Eigen::Index m_rows = e.rows();
    st.phase.resize(static_cast<std::size_t>(m_rows));
    st.resultant_complement.resize(m_rows);
    st.log_i0_scaled.resize(m_rows);
    if (st.y_bar.size() != m_rows)
        st.y_bar.resize(m_rows);

    const double two_over_sn = 2.0 / st.sigma_n2_hat;
    for (Eigen::Index mu = 0; mu < m_rows; ++mu) {
        const cplx w = e.y[mu] * st.z_mean[mu];
        const double aw = std::abs(w);
        VonMisesStats &vm = st.phase[static_cast<std::size_t>(mu)];
        if (aw == 0.0) {
            vm = VonMisesStats{};
            st.resultant_complement[mu] = 1.0;
            st.log_i0_scaled[mu] = 0.0;
            st.y_bar[mu] = cplx(0.0, 0.0);
            continue;
        }
        const Concentration kappa(two_over_sn * aw);
        const double r = bessel_ratio(kappa);
        vm.mean_direction = wrap_angle(std::arg(w));
        vm.concentration = kappa;
        vm.resultant = r;
        st.resultant_complement[mu] = bessel_ratio_complement(kappa);
        st.log_i0_scaled[mu] = log_bessel_i0_scaled(kappa);

        const cplx dir = w / aw;
        cplx yb = (e.y[mu] * r) * dir;
        // r < 1 by contract, but the unit-direction division can carry a
        // one-ulp excess; enforce |y_bar| <= y exactly.
        double ayb = std::abs(yb);
        while (ayb > e.y[mu]) {
            yb *= e.y[mu] / ayb;
            ayb = std::abs(yb);
        }
        st.y_bar[mu] = yb;
    }
}

void sweep_coefficients(PosteriorState &st, const MeasurementEnsemble &e) {
    const double sn = st.sigma_n2_hat;
    const double sx = st.sigma_x2_hat;
    st.residual = st.y_bar - st.z_mean;
    for (Eigen::Index i = 0; i < e.cols(); ++i) {
        const double ei = e.column_energies[i];
        const double denom = sn + sx * ei;
        st.sigma[i] = sn * sx / denom;
        const cplx proj = e.d.col(i).dot(st.residual) + st.m[i] * ei;
        const cplx m_new = (sx / denom) * proj;
        const cplx delta = st.m[i] - m_new;
        st.residual.noalias() += delta * e.d.col(i);
        st.m[i] = m_new;
    }
    st.z_mean.noalias() = e.d * st.m;
    st.residual = st.y_bar - st.z_mean;
}

double expected_misfit(const PosteriorState &st,
                       const MeasurementEnsemble &e) {
    double q = st.residual.squaredNorm();
    for (Eigen::Index mu = 0; mu < e.rows(); ++mu) {
        const double u = st.resultant_complement[mu];
        q += e.y[mu] * e.y[mu] * u * (2.0 - u);
    }
    q += st.sigma.dot(e.column_energies);
    return q;
}

double estimate_noise_variance(PosteriorState &st,
                               const MeasurementEnsemble &e) {
    const double raw = expected_misfit(st, e) / static_cast<double>(e.rows());
    st.sigma_n2_hat = std::max(st.sigma_n2_floor, raw);
    return st.sigma_n2_hat;
}

double estimate_signal_variance(PosteriorState &st) {
    st.sigma_x2_hat = (st.m.squaredNorm() + st.sigma.sum()) /
                      static_cast<double>(st.m.size());
    return st.sigma_x2_hat;
}

FreeEnergyTerms free_energy_terms(const PosteriorState &st,
                                  const MeasurementEnsemble &e) {
    const Eigen::Index m_rows = e.rows();
    const Eigen::Index n_cols = e.cols();

    // Phase factors: E[log q(theta)] - E[log p(theta)] per measurement is
    // kappa * resultant - log I0, rearranged through the complement and the
    // scaled log I0 so that nothing cancels at large kappa.
    double phase = 0.0;
    for (Eigen::Index mu = 0; mu < m_rows; ++mu) {
        const double kappa =
            st.phase[static_cast<std::size_t>(mu)].concentration.value();
        phase -= kappa * st.resultant_complement[mu] + st.log_i0_scaled[mu];
    }

    double gauss_entropy = 0.0;
    for (Eigen::Index i = 0; i < n_cols; ++i)
        gauss_entropy -= std::log(M_PI * M_E * st.sigma[i]);

    const double sx = st.sigma_x2_hat;
    const double signal_prior =
        n_cols * std::log(M_PI * sx) +
        (st.m.squaredNorm() + st.sigma.sum()) / sx;

    const double sn = st.sigma_n2_hat;
    const double likelihood =
        m_rows * std::log(M_PI * sn) + expected_misfit(st, e) / sn;

    FreeEnergyTerms t;
    t.phase = phase;
    t.gauss_entropy = gauss_entropy;
    t.signal_prior = signal_prior;
    t.likelihood = likelihood;
    t.total = phase + gauss_entropy + signal_prior + likelihood;
    return t;
}

double free_energy(PosteriorState &st, const MeasurementEnsemble &e) {
    st.free_energy = free_energy_terms(st, e).total;
    return st.free_energy;
}

PosteriorState init_state(const MeasurementEnsemble &e, const ModelParams &p,
                          const SolverConfig &c) {
    validate(e, p, c);
    const Eigen::Index m_rows = e.rows();
    const Eigen::Index n_cols = e.cols();

    PosteriorState st;
    const double mean_power = e.y.squaredNorm() / static_cast<double>(m_rows);
    st.sigma_n2_floor = c.sigma_n2_floor * std::max(1.0, mean_power);
    st.sigma_n2_hat = p.estimate_noise
                          ? std::max(st.sigma_n2_floor, mean_power)
                          : std::max(st.sigma_n2_floor, p.sigma_n2);
    st.sigma_x2_hat = p.sigma_x2;

    st.m.resize(n_cols);
    if (c.init_scheme == SolverConfig::Init::zero_mean) {
        st.m.setZero();
    } else {
        RandomStream rng(c.seed);
        for (Eigen::Index i = 0; i < n_cols; ++i)
            st.m[i] = rng.complex_gaussian(p.sigma_x2);
    }

    st.sigma.resize(n_cols);
    const double sn = st.sigma_n2_hat;
    const double sx = st.sigma_x2_hat;
    for (Eigen::Index i = 0; i < n_cols; ++i)
        st.sigma[i] = sn * sx / (sn + sx * e.column_energies[i]);

    st.z_mean.noalias() = e.d * st.m;
    update_phase_stats(st, e);
    st.residual = st.y_bar - st.z_mean;
    free_energy(st, e);
    return st;
}

SolveResult solve(const MeasurementEnsemble &e, const ModelParams &p,
                  const SolverConfig &c) {
    validate(e, p, c);

    SolveResult best;
    bool have_result = false;
    for (int r = 0; r < c.restarts; ++r) {
        SolverConfig cr = c;
        if (r > 0)
            cr.seed = derive_seed(c.seed, {0x52535452ULL,
                                           static_cast<std::uint64_t>(r)});
        PosteriorState st = init_state(e, p, cr);
        std::vector<double> trace;
        trace.reserve(static_cast<std::size_t>(c.max_iters) + 1);
        trace.push_back(st.free_energy);

        double f_prev = st.free_energy;
        int iters = 0;
        for (int t = 0; t < c.max_iters; ++t) {
            update_phase_stats(st, e);
            sweep_coefficients(st, e);
            if (p.estimate_noise)
                estimate_noise_variance(st, e);
            if (p.estimate_signal_var)
                estimate_signal_variance(st);
            const double f = free_energy(st, e);
            trace.push_back(f);
            iters = t + 1;
            if (f_prev - f < c.kl_tol)
                break;
            f_prev = f;
        }

        if (!have_result || st.free_energy < best.state.free_energy) {
            best.x_hat = st.m;
            best.state = std::move(st);
            best.iterations = iters;
            best.fe_trace = std::move(trace);
            have_result = true;
        }
    }
    return best;
}

}  // namespace phaseret::vbem
