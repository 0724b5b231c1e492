#include "octoport/mc_sim.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "octoport/numeric.hpp"
#include "octoport/stats.hpp"

namespace octoport {

double grid_dt(const SimConfig& cfg) {
    const double tau = effective_tau(cfg.detector);
    double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(cfg.laser, cfg.detector.kappa_resp);
    if (tau / dt < 200.0) dt = tau / 200.0;
    return dt;
}

std::array<double, 4> poisson_intensities(const Coefficients& c, std::complex<double> f,
                                          std::complex<double> fs) {
    std::array<double, 4> J;
    if (fs == std::complex<double>{0.0, 0.0}) {
        // Vacuum signal: no interference, the oscillator column alone.
        const double a = std::norm(f);
        for (int k = 0; k < 4; ++k) J[k] = c.gains[k][1] * a;
        return J;
    }
    for (int k = 0; k < 4; ++k) {
        const double sgn = k < 2 ? 1.0 : -1.0;
        const std::complex<double> mix =
            std::sqrt(c.gains[k][0]) * fs +
            sgn * std::complex<double>(0.0, 1.0) * std::polar(1.0, c.psi[k % 2]) *
                std::sqrt(c.gains[k][1]) * f;
        J[k] = std::norm(mix);
    }
    return J;
}

std::vector<double> simulate_counts(const std::vector<double>& intensity, double t0, double dt,
                                    Rng& rng) {
    if (intensity.size() < 2 || dt <= 0.0)
        throw std::invalid_argument("simulate_counts: need a grid of at least 2 nodes");
    double jmax = 0.0;
    for (double v : intensity) {
        if (v < 0.0) throw std::invalid_argument("simulate_counts: negative intensity");
        jmax = std::max(jmax, v);
    }
    std::vector<double> events;
    if (jmax == 0.0) return events;
    const double horizon = dt * static_cast<double>(intensity.size() - 1);
    if (jmax * horizon > 1e8)
        throw std::runtime_error("simulate_counts: expected event count exceeds 1e8");

    // Thinning under the piecewise-linear majorant sup J (attained at a node).
    double t = 0.0;
    while (true) {
        t += rng.exponential() / jmax;
        if (t >= horizon) break;
        const double z = t / dt;
        const std::size_t i = static_cast<std::size_t>(z);
        const double w = z - static_cast<double>(i);
        const double j_here = intensity[i] * (1.0 - w) + intensity[i + 1] * w;
        if (rng.uniform() * jmax < j_here) events.push_back(t0 + t);
    }
    return events;
}

namespace {

int worker_threads(int m) {
    int n = 0;
    if (const char* env = std::getenv("OCTOPORT_THREADS")) {
        n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return std::min(n, std::max(1, m));
}

/// Runs fn(i) for i in [0, m) on the worker pool; each index owns its RNG
/// stream, so the schedule cannot affect results.
void parallel_for(int m, const std::function<void(int)>& fn) {
    const int nw = worker_threads(m);
    if (nw <= 1) {
        for (int i = 0; i < m; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < m; i += nw) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

BatchMeta make_meta(const SimConfig& cfg, double dt, double tau) {
    BatchMeta meta;
    meta.regime = cfg.regime;
    meta.signal = cfg.signal;
    meta.rng_seed = cfg.rng_seed;
    meta.m = cfg.m;
    meta.electronic_noise = cfg.electronic_noise;
    meta.dt = dt;
    meta.tau = tau;
    meta.circuit = cfg.circuit;
    meta.laser = cfg.laser;
    meta.detector = cfg.detector;
    return meta;
}

std::complex<double> fs_at(const SimConfig& cfg, double r) {
    return cfg.fs_path ? cfg.fs_path(r) : cfg.fs_amp;
}

}  // namespace

SampleBatch sample_x_finite_lo(const SimConfig& cfg) {
    validate(cfg.circuit);
    validate(cfg.laser);
    validate(cfg.detector, &cfg.laser);
    if (cfg.m < 1) throw std::invalid_argument("sample_x_finite_lo: m must be >= 1");

    const Coefficients coeff = derive_coefficients(cfg.circuit, cfg.laser.lambda_abs2);
    const double tau = effective_tau(cfg.detector);
    const double dt = grid_dt(cfg);
    const int n = static_cast<int>(std::ceil(tau / dt)) + 1;
    const double lam = std::sqrt(cfg.laser.lambda_abs2);
    const bool coherent = cfg.signal == Signal::coherent;

    SampleBatch batch;
    batch.meta = make_meta(cfg, dt, tau);
    batch.x.resize(static_cast<std::size_t>(cfg.m));

    parallel_for(cfg.m, [&](int idx) {
        Rng rng(derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(idx)));
        std::array<std::vector<double>, 4> J;
        for (auto& v : J) v.resize(static_cast<std::size_t>(n));

        if (!coherent) {
            const std::vector<double> u = sample_u_path(cfg.laser, dt, n, rng);
            for (int i = 0; i < n; ++i) {
                const double a = cfg.laser.lambda_abs2 * u[static_cast<std::size_t>(i)] *
                                 u[static_cast<std::size_t>(i)];
                for (int k = 0; k < 4; ++k)
                    J[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                        coeff.gains[k][1] * a;
            }
        } else {
            const double theta = cfg.laser.fixed_theta ? *cfg.laser.fixed_theta
                                                       : 2.0 * pi * rng.uniform();
            const auto bb = sample_baseband_path(cfg.laser, theta, dt, n, rng);
            for (int i = 0; i < n; ++i) {
                const std::complex<double> f = lam * bb[static_cast<std::size_t>(i)];
                const auto Ji = poisson_intensities(coeff, f, fs_at(cfg, dt * i));
                for (int k = 0; k < 4; ++k)
                    J[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = Ji[k];
            }
        }

        double M[4];
        const double kap = cfg.detector.kappa_resp;
        for (int k = 0; k < 4; ++k) {
            const auto events = simulate_counts(J[static_cast<std::size_t>(k)], 0.0, dt, rng);
            double acc = 0.0;
            // The grid may overshoot tau by a fraction of a step; events past
            // the sampling time see h = 0.
            for (double te : events)
                if (te <= tau) acc += std::exp(-kap * (tau - te));
            M[k] = cfg.circuit.xi[k] * kap * acc;
        }

        std::array<double, 2> x{M[0] - M[2], M[1] - M[3]};
        if (cfg.electronic_noise) {
            for (int j = 0; j < 2; ++j) {
                if (cfg.detector.sigma_el[j] > 0.0)
                    x[j] += cfg.detector.sigma_el[j] * rng.normal();
            }
        }
        batch.x[static_cast<std::size_t>(idx)] = x;
    });
    return batch;
}

SampleBatch sample_y_strong_lo(const SimConfig& cfg) {
    validate(cfg.circuit);
    validate(cfg.laser);
    validate(cfg.detector, &cfg.laser);
    if (cfg.m < 1) throw std::invalid_argument("sample_y_strong_lo: m must be >= 1");

    const Coefficients coeff = derive_coefficients(cfg.circuit, cfg.laser.lambda_abs2);
    const double tau = effective_tau(cfg.detector);
    const double dt = grid_dt(cfg);
    const int n = static_cast<int>(std::ceil(tau / dt)) + 1;
    const double lam = std::sqrt(cfg.laser.lambda_abs2);
    const double kap = cfg.detector.kappa_resp;
    const bool coherent = cfg.signal == Signal::coherent;

    // Response weights over the window, h at t_l - t_i.
    std::vector<double> h(static_cast<std::size_t>(n)), h2(static_cast<std::size_t>(n));
    const double t_l = dt * (n - 1);
    for (int i = 0; i < n; ++i) {
        const double v = kap * std::exp(-kap * (t_l - dt * i));
        h[static_cast<std::size_t>(i)] = v;
        h2[static_cast<std::size_t>(i)] = v * v;
    }

    SampleBatch batch;
    batch.meta = make_meta(cfg, dt, tau);
    batch.x.resize(static_cast<std::size_t>(cfg.m));

    parallel_for(cfg.m, [&](int idx) {
        Rng rng(derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(idx)));

        double ih = 0.0, r2 = 0.0;
        std::array<double, 2> cross{0.0, 0.0};
        if (!coherent) {
            const std::vector<double> u = sample_u_path(cfg.laser, dt, n, rng);
            double wsum_h = 0.0, wsum_h2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double u2 = u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
                const double edge = (i == 0 || i == n - 1) ? 0.5 : 1.0;
                wsum_h += edge * h[static_cast<std::size_t>(i)] * u2;
                wsum_h2 += edge * h2[static_cast<std::size_t>(i)] * u2;
            }
            ih = wsum_h * dt;
            r2 = wsum_h2 * dt;
        } else {
            const double theta = cfg.laser.fixed_theta ? *cfg.laser.fixed_theta
                                                       : 2.0 * pi * rng.uniform();
            const auto bb = sample_baseband_path(cfg.laser, theta, dt, n, rng);
            double wsum_h = 0.0, wsum_h2 = 0.0;
            std::array<double, 2> wcross{0.0, 0.0};
            for (int i = 0; i < n; ++i) {
                const double u2 = std::norm(bb[static_cast<std::size_t>(i)]);
                const double edge = (i == 0 || i == n - 1) ? 0.5 : 1.0;
                wsum_h += edge * h[static_cast<std::size_t>(i)] * u2;
                wsum_h2 += edge * h2[static_cast<std::size_t>(i)] * u2;
                const std::complex<double> prod =
                    std::conj(fs_at(cfg, dt * i)) * bb[static_cast<std::size_t>(i)];
                for (int j = 0; j < 2; ++j) {
                    const std::complex<double> term =
                        std::complex<double>(0.0, 1.0) * std::polar(1.0, coeff.psi[j]) * prod;
                    wcross[j] += edge * h[static_cast<std::size_t>(i)] * 2.0 * term.real();
                }
            }
            ih = wsum_h * dt;
            r2 = wsum_h2 * dt;
            cross = {wcross[0] * dt, wcross[1] * dt};
        }

        std::array<double, 2> x{};
        for (int j = 0; j < 2; ++j) {
            const double mu_y = coeff.delta[j][1] * lam * ih +
                                (coherent ? coeff.kappa[j][2] * cross[j] : 0.0);
            const double y = mu_y + std::sqrt(coeff.kappa[j][1] * r2) * rng.normal();
            x[j] = lam * y;
            if (cfg.electronic_noise && cfg.detector.sigma_el[j] > 0.0)
                x[j] += cfg.detector.sigma_el[j] * rng.normal();
        }
        batch.x[static_cast<std::size_t>(idx)] = x;
    });
    return batch;
}

SampleBatch sample(const SimConfig& cfg) {
    return cfg.regime == Regime::finite_lo ? sample_x_finite_lo(cfg) : sample_y_strong_lo(cfg);
}

Moments empirical_moments(const SampleBatch& b) {
    const std::size_t m = b.x.size();
    if (m < 3) throw std::invalid_argument("empirical_moments: need at least 3 samples");
    std::vector<double> x1(m), x2(m);
    for (std::size_t i = 0; i < m; ++i) {
        x1[i] = b.x[i][0];
        x2[i] = b.x[i][1];
    }

    Moments mo;
    mo.m = m;
    const MeanVar v1 = mean_var(x1);
    const MeanVar v2 = mean_var(x2);
    mo.mean = {v1.mean, v2.mean};
    mo.mean_se = {v1.mean_se, v2.mean_se};
    mo.cov[0][0] = v1.var;
    mo.cov[1][1] = v2.var;
    mo.cov_se[0][0] = v1.var_se;
    mo.cov_se[1][1] = v2.var_se;
    const CovEst c12 = covariance(x1, x2);
    mo.cov[0][1] = mo.cov[1][0] = c12.cov;
    mo.cov_se[0][1] = mo.cov_se[1][0] = c12.se;

    for (int j = 0; j < 2; ++j) {
        const std::vector<double>& x = j == 0 ? x1 : x2;
        const double mean = mo.mean[j];
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (double v : x) {
            const double c = v - mean;
            const double c2 = c * c;
            m2 += c2;
            m3 += c2 * c;
            m4 += c2 * c2;
        }
        const double md = static_cast<double>(m);
        m2 /= md;
        m3 /= md;
        m4 /= md;
        mo.skewness[j] = m3 / std::pow(m2, 1.5);
        mo.excess_kurtosis[j] = m4 / (m2 * m2) - 3.0;
    }
    return mo;
}

void write_csv(const SampleBatch& b, std::ostream& os) {
    os << "l,x1,x2\n";
    char buf[80];
    for (std::size_t i = 0; i < b.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, b.x[i][0], b.x[i][1]);
        os << buf;
    }
}

namespace {

nlohmann::json params_json(const BatchMeta& meta) {
    const CircuitParams& c = meta.circuit;
    const LaserParams& l = meta.laser;
    const DetectorParams& d = meta.detector;
    nlohmann::json j;
    j["circuit"] = {{"eta", c.eta},   {"eps", c.eps},   {"xi", c.xi},
                    {"psi1", c.psi1}, {"psi2", c.psi2}};
    j["laser"] = {{"lambda_abs2", l.lambda_abs2},
                  {"omega0", l.omega0},
                  {"gamma0", l.gamma0},
                  {"w", l.w},
                  {"v0", l.v0},
                  {"gamma1", l.gamma1}};
    if (l.fixed_theta) j["laser"]["theta"] = *l.fixed_theta;
    j["detector"] = {{"kappa_resp", d.kappa_resp},
                     {"sigma_el", d.sigma_el},
                     {"tau", meta.tau}};
    return j;
}

}  // namespace

std::string meta_json(const SampleBatch& b) {
    nlohmann::json j;
    j["regime"] = b.meta.regime == Regime::finite_lo ? "finite_lo" : "strong_lo";
    j["signal"] = b.meta.signal == Signal::vacuum ? "vacuum" : "coherent";
    j["seed"] = b.meta.rng_seed;
    j["m"] = b.meta.m;
    j["electronic_noise"] = b.meta.electronic_noise;
    j["dt"] = b.meta.dt;
    j["params"] = params_json(b.meta);
    return j.dump(2);
}

std::string moments_json(const Moments& mo) {
    nlohmann::json j;
    j["m"] = mo.m;
    j["mean"] = mo.mean;
    j["mean_se"] = mo.mean_se;
    j["cov"] = {{mo.cov[0][0], mo.cov[0][1]}, {mo.cov[1][0], mo.cov[1][1]}};
    j["cov_se"] = {{mo.cov_se[0][0], mo.cov_se[0][1]}, {mo.cov_se[1][0], mo.cov_se[1][1]}};
    j["skewness"] = mo.skewness;
    j["excess_kurtosis"] = mo.excess_kurtosis;
    return j.dump(2);
}

}  // namespace octoport
