#pragma once

// Closed-form first and second moments of the two difference photocurrents,
// the vacuum noise budget (shot noise + intensity-noise leakage + electronic
// noise) and the coherent-signal mean evolution by quadrature.

#include <array>
#include <complex>
#include <functional>

#include "octoport/circuit.hpp"
#include "octoport/detector.hpp"
#include "octoport/laser.hpp"

namespace octoport {

/// Vacuum-input noise budget of (X1, X2). All voltages.
struct NoiseBudget {
    std::array<double, 2> mean{0.0, 0.0};     ///< mu_j = Delta_j2 |lambda|^2
    std::array<double, 2> Sigma2{0.0, 0.0};   ///< diagonal variances
    double C[2][2]{};                         ///< covariance matrix
    std::array<double, 2> Upsilon{0.0, 0.0};  ///< intensity-noise ratios
    std::array<double, 2> Theta{0.0, 0.0};    ///< electronic-noise ratios
    double E12 = 1.0;                         ///< excess factor in det C
    double det_C = 0.0;
    double shot2[2]{};       ///< kappa_j2 |lambda|^2 S0 (shot-noise variances)
    double quad2[2]{};       ///< kappa_j3^2 |lambda|^2 S0 (vacuum quadrature scale)
    double s0 = 0.0;
    double c0 = 0.0;
    double lambda_abs2 = 0.0;
};

/// Assembles the budget from circuit coefficients and detector scales:
/// Sigma_j^2 = kappa_j2 |l|^2 S0 + Delta_j2^2 |l|^4 C0 + sigma_el_j^2,
/// off-diagonal Delta_12 Delta_22 |l|^4 C0,
/// det C = kappa_12 kappa_22 |l|^4 S0^2 E12.
NoiseBudget vacuum_budget(const Coefficients& c, double S0, double C0, double lambda_abs2,
                          std::array<double, 2> sigma_el);

/// Upsilon of the symmetric reduced circuit: (1-2 eta)^2 |lambda|^2 C0 / (2 S0).
double simplified_upsilon(double eta, double lambda_abs2, double C0, double S0);

/// Budget of the symmetric reduced circuit (equal diodes, eta1 = eta2 = 1/2,
/// eta3 = eta4 = eta): kappa_j2 = eps xi^2 / 2, Delta_j2 = eps xi (1-2 eta)/2,
/// Upsilon_j = eps Upsilon, Theta_j = Theta / eps,
/// Sigma^2 = (|xi lambda|^2 / 2) S0 (Theta + eps + eps^2 Upsilon).
NoiseBudget simplified_budget(double eta, double eps, double xi, double Upsilon, double Theta,
                              double S0, double lambda_abs2);

/// Mean photocurrents E[X_j(t)] for a deterministic coherent signal, by
/// adaptive quadrature of the response integral. fs_baseband is the signal
/// envelope in the frame co-rotating at omega0 (pass {} for vacuum).
std::array<double, 2> coherent_means(const Coefficients& c, const LaserParams& laser,
                                     const DetectorParams& det,
                                     const std::function<std::complex<double>(double)>& fs_baseband,
                                     double t);

struct DensityBound {
    double bound;        ///< 1 / (4 pi R_l^2 kappa_13 kappa_23 |sin phi|)
    double vacuum_peak;  ///< product of (2 pi kappa_j2 R_l^2)^{-1/2}
    bool ok;             ///< vacuum_peak <= bound
};

/// Uniform bound on the conditional (Y1, Y2) density versus the vacuum peak.
/// Throws std::domain_error when sin(phi) = 0.
DensityBound density_bound_check(const Coefficients& c, double r_l2, double phi);

}  // namespace octoport
