#pragma once

// Optical circuit of the eight-port (double) homodyne detector: four beam
// splitters, four photodiodes with efficiencies and current-conversion
// factors, and the derived coefficient set every downstream formula consumes.
// Index convention: j = 0,1 labels the two difference channels (X1 = diode 1
// minus diode 3, X2 = diode 2 minus diode 4); diodes are 0..3.

#include <array>
#include <complex>

namespace octoport {

/// Raw circuit parameters.
///
/// eta[0], eta[1]: splitting ratios of the two input beam splitters;
/// eta[2], eta[3]: splitting ratios in front of the diode pairs (1,3) and
/// (2,4). eps[k] are quantum efficiencies of diodes k+1, xi[k] their
/// charge-to-voltage conversion factors in volt-seconds. psi1, psi2 are the
/// local-oscillator phases seen by the two channels.
struct CircuitParams {
    std::array<double, 4> eta{0.5, 0.5, 0.5, 0.5};
    std::array<double, 4> eps{1.0, 1.0, 1.0, 1.0};
    std::array<double, 4> xi{1.0, 1.0, 1.0, 1.0};
    double psi1 = 0.0;
    double psi2 = 0.0;
};

/// Derived coefficients. kappa[j][i] and delta[j][i] hold the quantities
/// indexed j1, j2, j3 for channel j; g2/g3 are the channel gain factors, v2
/// and sig2 the splitting-imbalance and efficiency-mismatch variances (with
/// their tilde companions), phi the reduced phase difference. gains[k][0..1]
/// are the per-diode intensity couplings to (signal, oscillator); all of them
/// together feed the Poisson intensities of the counting model.
struct Coefficients {
    double kappa[2][3]{};
    double delta[2][3]{};
    double phi = 0.0;
    std::array<double, 2> psi{0.0, 0.0};
    std::array<double, 2> g2{0.0, 0.0};    ///< G_12, G_22 (dimensionless, carries |lambda|)
    std::array<double, 2> g3{0.0, 0.0};    ///< G_13, G_23
    std::array<double, 2> v2{0.0, 0.0};    ///< V_j^2
    std::array<double, 2> v2_tilde{0.0, 0.0};
    std::array<double, 2> sig2{0.0, 0.0};  ///< sigma_j^2
    std::array<double, 2> sig2_tilde{0.0, 0.0};
    double gains[4][2]{};
    double lambda_abs2 = 0.0;
    int channels = 2;  ///< 1 when produced by single_homodyne_params
};

/// Reduces an angle to (-pi, pi].
double reduce_phase(double phi);

/// Throws std::invalid_argument when a parameter is outside its domain
/// (eta1..4 strictly inside (0,1), eps in (0,1], xi > 0).
void validate(const CircuitParams& p);

/// Computes every derived coefficient for the double homodyne circuit.
/// Throws std::domain_error when a kappa_j3 vanishes.
Coefficients derive_coefficients(const CircuitParams& p, double lambda_abs2);

/// Single homodyne reduction: the circuit keeps beam splitter eta3 and diodes
/// 1 and 3 only (eta1 = eta2 = 1 imposed internally). G_13 = 0 and the tilde
/// quantities coincide with their plain versions. lambda_abs2 is optional and
/// only feeds G_12.
Coefficients single_homodyne_params(const CircuitParams& p, double lambda_abs2 = 0.0);

}  // namespace octoport
