#pragma once

// Monte Carlo photocurrent engines. The finite-oscillator engine draws the
// actual photoelectron point processes (inhomogeneous Poisson by thinning)
// and sums the exponential response over events; the strong-oscillator engine
// samples the Gaussian limit law conditioned on the oscillator trajectory.
// Both produce voltage pairs (X1, X2), one independent stationary window per
// sample.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "octoport/circuit.hpp"
#include "octoport/detector.hpp"
#include "octoport/laser.hpp"

namespace octoport {

enum class Regime { finite_lo, strong_lo };
enum class Signal { vacuum, coherent };

struct SimConfig {
    Regime regime = Regime::strong_lo;
    Signal signal = Signal::vacuum;
    std::complex<double> fs_amp{0.0, 0.0};  ///< constant coherent envelope (baseband)
    std::function<std::complex<double>(double)> fs_path;  ///< optional envelope path, overrides fs_amp
    int m = 1000;
    std::uint64_t rng_seed = 1;
    bool electronic_noise = true;
    double dt = 0.0;  ///< grid step override [s]; 0 = default
    CircuitParams circuit;
    LaserParams laser;
    DetectorParams detector;
};

struct BatchMeta {
    Regime regime = Regime::strong_lo;
    Signal signal = Signal::vacuum;
    std::uint64_t rng_seed = 0;
    int m = 0;
    bool electronic_noise = true;
    double dt = 0.0;
    double tau = 0.0;
    CircuitParams circuit;
    LaserParams laser;
    DetectorParams detector;
};

struct SampleBatch {
    std::vector<std::array<double, 2>> x;  ///< volts
    BatchMeta meta;
};

/// Grid step actually used by the engines: default_dt clamped so a window
/// holds at least 200 points.
double grid_dt(const SimConfig& cfg);

/// Photon-flux intensities of the four diodes given oscillator amplitude f
/// and signal amplitude fs (both baseband):
/// J_k = |sqrt(g_k1) fs + s_k i e^{i psi} sqrt(g_k2) f|^2, s = (+,+,-,-).
/// fs = 0 short-circuits to g_k2 |f|^2 exactly (no phase arithmetic).
std::array<double, 4> poisson_intensities(const Coefficients& c, std::complex<double> f,
                                          std::complex<double> fs);

/// Inhomogeneous Poisson event times on [t0, t0 + (n-1) dt] by thinning under
/// the sup majorant of the piecewise-linear intensity. Throws
/// std::runtime_error when the expected event count exceeds 1e8.
std::vector<double> simulate_counts(const std::vector<double>& intensity, double t0, double dt,
                                    Rng& rng);

SampleBatch sample_x_finite_lo(const SimConfig& cfg);
SampleBatch sample_y_strong_lo(const SimConfig& cfg);

/// Dispatch on cfg.regime.
SampleBatch sample(const SimConfig& cfg);

struct Moments {
    std::array<double, 2> mean{0.0, 0.0};
    std::array<double, 2> mean_se{0.0, 0.0};
    double cov[2][2]{};
    double cov_se[2][2]{};
    std::array<double, 2> skewness{0.0, 0.0};
    std::array<double, 2> excess_kurtosis{0.0, 0.0};
    std::uint64_t m = 0;
};

/// Unbiased mean/covariance with delete-1 jackknife standard errors, plus
/// shape diagnostics for the normal-approximation quality.
Moments empirical_moments(const SampleBatch& b);

void write_csv(const SampleBatch& b, std::ostream& os);
std::string meta_json(const SampleBatch& b);
std::string moments_json(const Moments& mo);

}  // namespace octoport
