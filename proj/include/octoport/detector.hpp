#pragma once

// Photodetector response model and the two scale factors it induces on the
// difference currents: the white-noise scale S0 = kappa/2 of the exponential
// response h(t) = kappa e^{-kappa t}, and the intensity-noise filtering
// factor C0. Also the per-trajectory quadrature R_l^2 and the harmonic-mean
// scale S_minus used by the conditional entropy.

#include <array>
#include <cstdint>
#include <vector>

#include "octoport/laser.hpp"

namespace octoport {

struct DetectorParams {
    double kappa_resp = 1.0;                 ///< response rate [1/s]
    std::array<double, 2> sigma_el{0.0, 0.0};  ///< electronic noise per channel [V]
    double tau = 0.0;                        ///< integration window [s]; 0 = default 14/kappa
    std::vector<double> sample_times;        ///< optional explicit t_l (spacing >= tau)
};

/// Window length actually used.
double effective_tau(const DetectorParams& d);

/// h(t) = kappa e^{-kappa t} for t >= 0, else 0.
double response(const DetectorParams& d, double t);

/// Throws std::invalid_argument on kappa <= 0, negative sigma_el, sample-time
/// spacing below tau, or a window too short for the response (h(tau) must not
/// exceed 1e-6 h(0)); when `laser` is given, also requires v(tau) <= 1e-6 v(0)
/// for v0 > 0.
void validate(const DetectorParams& d, const LaserParams* laser = nullptr);

/// S0 = integral of h^2 = kappa/2 (closed form).
double s0(const DetectorParams& d);

/// Same integral by quadrature over [0, tau]; cross-check path.
double s0_quadrature(const DetectorParams& d);

/// C0 = [2 kappa (1-w^2) / (kappa + 2 gamma1)] (1 + w^2 + 2 gamma1 w^2 / (kappa + gamma1)).
double c0(const DetectorParams& d, const LaserParams& laser);

/// R_l^2 = integral over the window of h(r)^2 |f(t_l - r)|^2 / |lambda|^2 dr,
/// trapezoid on the trajectory grid. Throws std::runtime_error when the
/// window [t_l - tau, t_l] is not covered by the grid or resolved by fewer
/// than 200 points.
double r_l_squared(const LaserTrajectory& traj, const DetectorParams& d, double t_l);

struct SMinus {
    double value;      ///< 1 / E[R^{-2}]
    double std_error;  ///< delta-method s.e. of the estimate
};

/// Harmonic-mean scale from a batch of per-trajectory R_l^2 values. Enforces
/// the Jensen bound value <= S0 up to 3 s.e. plus a small quadrature
/// allowance (std::runtime_error otherwise).
SMinus s_minus_from_r2(const std::vector<double>& r2, const DetectorParams& d);

/// Convenience: samples `batch` independent stationary windows of the laser
/// and reduces them with s_minus_from_r2.
SMinus s_minus(const LaserParams& laser, const DetectorParams& d, int batch, std::uint64_t seed);

}  // namespace octoport
