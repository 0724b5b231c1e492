#include "octoport/detector.hpp"

#include <cmath>
#include <stdexcept>

#include "octoport/numeric.hpp"
#include "octoport/stats.hpp"

namespace octoport {

double effective_tau(const DetectorParams& d) {
    return d.tau > 0.0 ? d.tau : 14.0 / d.kappa_resp;
}

double response(const DetectorParams& d, double t) {
    if (t < 0.0) return 0.0;
    return d.kappa_resp * std::exp(-d.kappa_resp * t);
}

void validate(const DetectorParams& d, const LaserParams* laser) {
    if (!(d.kappa_resp > 0.0)) throw std::invalid_argument("detector: kappa_resp must be positive");
    for (double s : d.sigma_el)
        if (s < 0.0) throw std::invalid_argument("detector: sigma_el must be >= 0");
    const double tau = effective_tau(d);
    if (!(tau > 0.0)) throw std::invalid_argument("detector: tau must be positive");
    // The window must swallow the response: h(tau) <= 1e-6 h(0).
    if (std::exp(-d.kappa_resp * tau) > 1e-6)
        throw std::invalid_argument("detector: window too short, h(tau) > 1e-6 h(0)");
    if (laser && laser->v0 > 0.0 && std::exp(-laser->gamma1 * tau) > 1e-6)
        throw std::invalid_argument("detector: window too short, v(tau) > 1e-6 v(0)");
    for (std::size_t i = 1; i < d.sample_times.size(); ++i) {
        if (d.sample_times[i] - d.sample_times[i - 1] < tau)
            throw std::invalid_argument("detector: sample times closer than tau");
    }
}

double s0(const DetectorParams& d) { return 0.5 * d.kappa_resp; }

double s0_quadrature(const DetectorParams& d) {
    const double tau = effective_tau(d);
    return adaptive_simpson([&](double t) { const double h = response(d, t); return h * h; }, 0.0,
                            tau, 1e-12 * d.kappa_resp);
}

double c0(const DetectorParams& d, const LaserParams& laser) {
    const double k = d.kappa_resp;
    const double g1 = laser.gamma1;
    const double w2 = laser.w * laser.w;
    return 2.0 * k * (1.0 - w2) / (k + 2.0 * g1) *
           (1.0 + w2 + 2.0 * g1 * w2 / (k + g1));
}

double r_l_squared(const LaserTrajectory& traj, const DetectorParams& d, double t_l) {
    const double tau = effective_tau(d);
    const TimeGrid& g = traj.grid;
    const double t_end = g.t0 + g.dt * (g.n - 1);
    const double start = t_l - tau;
    if (start < g.t0 - 0.5 * g.dt || t_l > t_end + 0.5 * g.dt)
        throw std::runtime_error("r_l_squared: window not covered by the trajectory grid");

    const int i_lo = static_cast<int>(std::ceil((start - g.t0) / g.dt - 1e-9));
    const int i_hi = static_cast<int>(std::floor((t_l - g.t0) / g.dt + 1e-9));
    if (i_hi - i_lo + 1 < 200)
        throw std::runtime_error("r_l_squared: fewer than 200 grid points in the window");
    if (!(traj.lambda_abs2 > 0.0))
        throw std::runtime_error("r_l_squared: trajectory carries no flux scale");

    // The normalized intensity |f|^2 / |lambda|^2 enters the quadrature scale.
    std::vector<double> integ(static_cast<std::size_t>(i_hi - i_lo + 1));
    for (int i = i_lo; i <= i_hi; ++i) {
        const double t = g.t0 + g.dt * i;
        const double h = response(d, t_l - t);
        integ[static_cast<std::size_t>(i - i_lo)] = h * h * traj.abs2[static_cast<std::size_t>(i)];
    }
    return trapezoid(integ, g.dt) / traj.lambda_abs2;
}

SMinus s_minus_from_r2(const std::vector<double>& r2, const DetectorParams& d) {
    if (r2.size() < 3) throw std::invalid_argument("s_minus: need at least 3 windows");
    std::vector<double> inv(r2.size());
    for (std::size_t i = 0; i < r2.size(); ++i) {
        if (!(r2[i] > 0.0)) throw std::runtime_error("s_minus: nonpositive R^2 in batch");
        inv[i] = 1.0 / r2[i];
    }
    const MeanVar mv = mean_var(inv);
    const double value = 1.0 / mv.mean;
    const double se = mv.mean_se / (mv.mean * mv.mean);
    const double S0 = s0(d);
    // The trapezoid overestimates the convex integrand h^2 by up to
    // (kappa dt)^2 / 3 relative; s_minus keeps kappa dt <= 0.02, so 5e-4
    // of slack covers the quadrature bias without hiding real violations.
    if (value > S0 * (1.0 + 5e-4) + 3.0 * se)
        throw std::runtime_error("s_minus: harmonic mean exceeded S0 beyond 3 s.e.");
    return {value, se};
}

SMinus s_minus(const LaserParams& laser, const DetectorParams& d, int batch, std::uint64_t seed) {
    validate(d, &laser);
    const double tau = effective_tau(d);
    double dt = default_dt(laser, d.kappa_resp);
    if (tau / dt < 200.0) dt = tau / 200.0;
    const int n = static_cast<int>(std::ceil(tau / dt)) + 1;

    std::vector<double> r2(static_cast<std::size_t>(batch));
    for (int b = 0; b < batch; ++b) {
        const TimeGrid grid{0.0, dt, n};
        const LaserTrajectory traj = sample_trajectory(laser, grid, derive_seed(seed, b));
        r2[static_cast<std::size_t>(b)] = r_l_squared(traj, d, grid.t0 + dt * (n - 1));
    }
    return s_minus_from_r2(r2, d);
}

}  // namespace octoport
