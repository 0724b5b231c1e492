#include "octoport/laser.hpp"

#include <cmath>
#include <stdexcept>

namespace octoport {

void validate(const LaserParams& p) {
    if (!(p.lambda_abs2 >= 0.0)) throw std::invalid_argument("laser: lambda_abs2 must be >= 0");
    if (!(p.gamma0 >= 0.0)) throw std::invalid_argument("laser: gamma0 must be >= 0");
    if (!(p.gamma1 >= 0.0)) throw std::invalid_argument("laser: gamma1 must be >= 0");
    if (p.v0 < 0.0) throw std::invalid_argument("laser: v0 must be >= 0");
    if (std::abs(p.w * p.w + p.v0 - 1.0) > 1e-12)
        throw std::invalid_argument("laser: w^2 + v0 must equal 1");
    if (p.v0 > 0.0 && p.gamma1 == 0.0)
        throw std::invalid_argument("laser: gamma1 must be positive when v0 > 0");
}

std::vector<double> sample_u_path(const LaserParams& p, double dt, int n, Rng& rng) {
    std::vector<double> u(static_cast<std::size_t>(n));
    if (p.v0 == 0.0) {
        for (auto& v : u) v = p.w;
        return u;
    }
    const double rho = std::exp(-p.gamma1 * dt);
    const double innov = std::sqrt(p.v0 * (1.0 - rho * rho));
    const double sd0 = std::sqrt(p.v0);
    u[0] = p.w + sd0 * rng.normal();
    for (int i = 1; i < n; ++i) {
        u[static_cast<std::size_t>(i)] =
            p.w + rho * (u[static_cast<std::size_t>(i - 1)] - p.w) + innov * rng.normal();
    }
    return u;
}

std::vector<std::complex<double>> sample_baseband_path(const LaserParams& p, double theta,
                                                       double dt, int n, Rng& rng) {
    const std::vector<double> u = sample_u_path(p, dt, n, rng);
    std::vector<std::complex<double>> f(static_cast<std::size_t>(n));
    const double diff = std::sqrt(2.0 * p.gamma0);
    const double sqdt = std::sqrt(dt);
    double wiener = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phase = theta - diff * wiener;
        f[static_cast<std::size_t>(i)] =
            std::polar(u[static_cast<std::size_t>(i)], phase);
        if (p.gamma0 > 0.0 && i + 1 < n) wiener += sqdt * rng.normal();
    }
    return f;
}

LaserTrajectory sample_trajectory(const LaserParams& p, const TimeGrid& grid, std::uint64_t seed) {
    validate(p);
    if (grid.n < 1 || grid.dt <= 0.0)
        throw std::invalid_argument("laser: trajectory grid must have n >= 1, dt > 0");

    Rng rng(seed);
    LaserTrajectory traj;
    traj.grid = grid;
    traj.lambda_abs2 = p.lambda_abs2;
    traj.theta = p.fixed_theta ? *p.fixed_theta : 2.0 * pi * rng.uniform();

    const auto bb = sample_baseband_path(p, traj.theta, grid.dt, grid.n, rng);
    const double amp = std::sqrt(p.lambda_abs2);
    traj.f.resize(bb.size());
    traj.abs2.resize(bb.size());
    for (int i = 0; i < grid.n; ++i) {
        const double t = grid.t0 + grid.dt * i;
        traj.f[static_cast<std::size_t>(i)] =
            amp * bb[static_cast<std::size_t>(i)] * std::polar(1.0, -p.omega0 * t);
        traj.abs2[static_cast<std::size_t>(i)] = std::norm(traj.f[static_cast<std::size_t>(i)]);
    }
    return traj;
}

namespace {

double v_of(const LaserParams& p, double lag) { return p.v0 * std::exp(-p.gamma1 * std::abs(lag)); }

}  // namespace

FirstMoments first_moments(const LaserParams& p, double t, double s) {
    validate(p);
    const double theta = p.fixed_theta.value_or(0.0);
    const std::complex<double> lambda = std::polar(std::sqrt(p.lambda_abs2), theta);
    const double l2 = p.lambda_abs2;
    const std::complex<double> iw0{0.0, p.omega0};
    const double v_ts = v_of(p, t - s);

    FirstMoments m;
    m.mean_t = lambda * p.w * std::exp(-(iw0 + p.gamma0) * t);
    m.corr_st = l2 * std::exp(iw0 * (s - t) - p.gamma0 * std::abs(t - s)) * (p.w * p.w + v_ts);
    m.pair_st = lambda * lambda *
                std::exp(-(iw0 + p.gamma0) * (t + s) - 2.0 * p.gamma0 * std::min(t, s)) *
                (p.w * p.w + v_ts);
    m.intensity_amp =
        l2 * lambda * p.w * (1.0 + 2.0 * v_ts) * std::exp(-(iw0 + p.gamma0) * s);
    m.intensity_cov = 2.0 * l2 * l2 * v_ts * (2.0 * p.w * p.w + v_ts);
    return m;
}

double rin_covariance(const LaserParams& p, double lag) {
    const double v = v_of(p, lag);
    return 2.0 * v * v + 4.0 * p.w * p.w * v;
}

double intensity_spectrum(const LaserParams& p, double mu) {
    const double d = mu - p.omega0;
    const double w2 = p.w * p.w;
    const double g01 = p.gamma0 + p.gamma1;
    return 2.0 * p.lambda_abs2 *
           (w2 * p.gamma0 / (p.gamma0 * p.gamma0 + d * d) +
            (1.0 - w2) * g01 / (g01 * g01 + d * d));
}

RinSpectrum rin_spectrum_and_eff(const LaserParams& p, double mu) {
    const double w2 = p.w * p.w;
    const double g1 = p.gamma1;
    const double density = 8.0 * (1.0 - w2) * g1 *
                           (w2 / (g1 * g1 + mu * mu) +
                            (1.0 - w2) / (4.0 * g1 * g1 + mu * mu));
    const double eff = (2.0 / g1) * (1.0 - w2) * (1.0 + 3.0 * w2);
    return {density, eff};
}

double default_dt(const LaserParams& p, double kappa_resp) {
    double scale = 0.0;
    bool any = false;
    auto fold = [&](double rate) {
        if (rate > 0.0) {
            const double s = 1.0 / rate;
            scale = any ? std::min(scale, s) : s;
            any = true;
        }
    };
    fold(p.gamma0);
    fold(p.gamma1);
    fold(kappa_resp);
    if (!any) throw std::invalid_argument("default_dt: no finite rate scale");
    return scale / 50.0;
}

}  // namespace octoport
