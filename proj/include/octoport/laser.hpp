#pragma once

// Local oscillator model: phase-diffused laser with a stationary Gaussian
// amplitude factor. f(t) = sqrt(|lambda|^2) e^{i theta - i omega0 t
// - i sqrt(2 gamma0) W(t)} u(t) where W is a Wiener process and u an AR(1)
// stationary Gaussian with mean w and covariance v0 exp(-gamma1 |t|),
// w^2 + v0 = 1. Closed-form moments, intensity and relative-intensity-noise
// spectra, and exact trajectory sampling.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "octoport/numeric.hpp"

namespace octoport {

struct LaserParams {
    double lambda_abs2 = 1.0;  ///< mean photon flux |lambda|^2 [1/s]
    double omega0 = 0.0;       ///< carrier frequency [rad/s]
    double gamma0 = 0.0;       ///< phase diffusion rate [1/s]
    double w = 1.0;            ///< mean of the amplitude factor u
    double v0 = 0.0;           ///< stationary variance of u; w^2 + v0 = 1
    double gamma1 = 0.0;       ///< amplitude relaxation rate [1/s]
    std::optional<double> fixed_theta;  ///< global phase; nullopt = uniform per trajectory
};

/// Throws std::invalid_argument on w^2 + v0 != 1 (1e-12), negative rates, or
/// gamma1 = 0 with v0 > 0.
void validate(const LaserParams& p);

/// Uniform time grid t_i = t0 + i dt, i = 0..n-1.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    int n = 0;
};

struct LaserTrajectory {
    TimeGrid grid;
    std::vector<std::complex<double>> f;  ///< physical amplitude, carrier included
    std::vector<double> abs2;             ///< |f(t_i)|^2
    double theta = 0.0;                   ///< global phase actually used
    double lambda_abs2 = 1.0;             ///< flux scale of the generating params
};

/// Exact sampler: Wiener increments sqrt(dt) N(0,1), exact AR(1) recursion
/// u_{i+1} = w + rho (u_i - w) + sqrt(v0 (1 - rho^2)) N(0,1) with
/// rho = exp(-gamma1 dt), u_0 ~ N(w, v0). No approximation beyond the grid.
LaserTrajectory sample_trajectory(const LaserParams& p, const TimeGrid& grid, std::uint64_t seed);

/// Stationary amplitude factor path u_0..u_{n-1} alone (the intensity-only
/// workload of the Monte Carlo samplers).
std::vector<double> sample_u_path(const LaserParams& p, double dt, int n, Rng& rng);

/// Baseband path e^{i theta - i sqrt(2 gamma0) W(t_i)} u(t_i) (carrier not
/// applied); theta must be supplied resolved.
std::vector<std::complex<double>> sample_baseband_path(const LaserParams& p, double theta,
                                                       double dt, int n, Rng& rng);

/// First and second moments of f at times (t, s), conditional on the global
/// phase (fixed_theta if set, else theta = 0).
struct FirstMoments {
    std::complex<double> mean_t;          ///< E[f(t)]
    std::complex<double> corr_st;         ///< E[conj(f(s)) f(t)]
    std::complex<double> pair_st;         ///< E[f(s) f(t)]
    std::complex<double> intensity_amp;   ///< E[|f(t)|^2 f(s)]
    double intensity_cov;                 ///< Cov[|f(t)|^2, |f(s)|^2]
};

FirstMoments first_moments(const LaserParams& p, double t, double s);

/// Covariance of the relative intensity noise n_RIN = u^2 - 1 at a lag:
/// 2 v(lag)^2 + 4 w^2 v(lag).
double rin_covariance(const LaserParams& p, double lag);

/// Two-Lorentzian intensity spectrum of f at angular frequency mu.
double intensity_spectrum(const LaserParams& p, double mu);

struct RinSpectrum {
    double density;  ///< Pi_RIN(mu)
    double eff;      ///< RIN_eff = Pi_RIN(0) = (2/gamma1)(1-w^2)(1+3w^2)
};

RinSpectrum rin_spectrum_and_eff(const LaserParams& p, double mu);

/// Default integration step: min over the finite rate scales (1/gamma0,
/// 1/gamma1, 1/kappa_resp) divided by 50. Rates equal to zero are skipped.
double default_dt(const LaserParams& p, double kappa_resp);

}  // namespace octoport
