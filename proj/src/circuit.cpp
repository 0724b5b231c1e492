#include "octoport/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "octoport/numeric.hpp"

namespace octoport {

double reduce_phase(double phi) {
    double r = std::fmod(phi, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    if (r > pi) r -= 2.0 * pi;
    return r;
}

void validate(const CircuitParams& p) {
    for (int k = 0; k < 4; ++k) {
        if (!(p.eta[k] > 0.0 && p.eta[k] < 1.0))
            throw std::invalid_argument("circuit: eta" + std::to_string(k + 1) +
                                        " must lie strictly inside (0,1)");
        if (!(p.eps[k] > 0.0 && p.eps[k] <= 1.0))
            throw std::invalid_argument("circuit: eps" + std::to_string(k + 1) +
                                        " must lie in (0,1]");
        if (!(p.xi[k] > 0.0))
            throw std::invalid_argument("circuit: xi" + std::to_string(k + 1) +
                                        " must be positive");
    }
    if (!std::isfinite(p.psi1) || !std::isfinite(p.psi2))
        throw std::invalid_argument("circuit: phases must be finite");
}

Coefficients derive_coefficients(const CircuitParams& p, double lambda_abs2) {
    validate(p);
    if (lambda_abs2 < 0.0) throw std::invalid_argument("circuit: lambda_abs2 must be >= 0");

    const double e1 = p.eta[0], e2 = p.eta[1], e3 = p.eta[2], e4 = p.eta[3];
    // Per-channel shorthand: channel 0 pairs diodes (1,3) through eta3,
    // channel 1 pairs diodes (2,4) through eta4.
    const double a1 = p.eps[0] * p.xi[0], a3 = p.eps[2] * p.xi[2];
    const double a2 = p.eps[1] * p.xi[1], a4 = p.eps[3] * p.xi[3];
    const double b1 = p.eps[0] * p.xi[0] * p.xi[0], b3 = p.eps[2] * p.xi[2] * p.xi[2];
    const double b2 = p.eps[1] * p.xi[1] * p.xi[1], b4 = p.eps[3] * p.xi[3] * p.xi[3];

    Coefficients c;
    c.lambda_abs2 = lambda_abs2;
    c.kappa[0][0] = e1 * (e3 * b1 + (1.0 - e3) * b3);
    c.kappa[1][0] = (1.0 - e1) * (e4 * b2 + (1.0 - e4) * b4);
    c.kappa[0][1] = e2 * ((1.0 - e3) * b1 + e3 * b3);
    c.kappa[1][1] = (1.0 - e2) * ((1.0 - e4) * b2 + e4 * b4);
    c.kappa[0][2] = std::sqrt(e1 * e2 * e3 * (1.0 - e3)) * (a1 + a3);
    c.kappa[1][2] = std::sqrt((1.0 - e1) * (1.0 - e2) * e4 * (1.0 - e4)) * (a2 + a4);

    c.delta[0][0] = e1 * (e3 * a1 - (1.0 - e3) * a3);
    c.delta[1][0] = (1.0 - e1) * (e4 * a2 - (1.0 - e4) * a4);
    c.delta[0][1] = e2 * ((1.0 - e3) * a1 - e3 * a3);
    c.delta[1][1] = (1.0 - e2) * ((1.0 - e4) * a2 - e4 * a4);
    c.delta[0][2] = std::sqrt(e1 * e2 * e3 * (1.0 - e3)) * (b1 - b3);
    c.delta[1][2] = std::sqrt((1.0 - e1) * (1.0 - e2) * e4 * (1.0 - e4)) * (b2 - b4);

    if (c.kappa[0][2] == 0.0 || c.kappa[1][2] == 0.0)
        throw std::domain_error("circuit: kappa_j3 vanished, channel gain undefined");

    c.psi = {p.psi1, p.psi2};
    c.phi = reduce_phase(p.psi2 - p.psi1);

    c.g3[0] = (1.0 - e1) / e1;
    c.g3[1] = e1 / (1.0 - e1);

    const double lambda_abs = std::sqrt(lambda_abs2);
    for (int j = 0; j < 2; ++j) {
        c.g2[j] = c.delta[j][1] * lambda_abs / c.kappa[j][2];
    }

    // Tilde quantities depend on the diode-pair stage only; the plain ones
    // fold in the first splitter.
    const double num_v1 = (1.0 - e3) * a1 - e3 * a3;
    const double num_v2 = (1.0 - e4) * a2 - e4 * a4;
    c.v2_tilde[0] = num_v1 * num_v1 / (e3 * (1.0 - e3) * (a1 + a3) * (a1 + a3));
    c.v2_tilde[1] = num_v2 * num_v2 / (e4 * (1.0 - e4) * (a2 + a4) * (a2 + a4));
    c.v2[0] = c.v2_tilde[0] / e1;
    c.v2[1] = c.v2_tilde[1] / (1.0 - e1);

    const double q1 = p.eps[0] * (1.0 - p.eps[0]) * p.xi[0] * p.xi[0];
    const double q3 = p.eps[2] * (1.0 - p.eps[2]) * p.xi[2] * p.xi[2];
    const double q2 = p.eps[1] * (1.0 - p.eps[1]) * p.xi[1] * p.xi[1];
    const double q4 = p.eps[3] * (1.0 - p.eps[3]) * p.xi[3] * p.xi[3];
    c.sig2_tilde[0] = (q1 / e3 + q3 / (1.0 - e3)) / ((a1 + a3) * (a1 + a3));
    c.sig2_tilde[1] = (q2 / e4 + q4 / (1.0 - e4)) / ((a2 + a4) * (a2 + a4));
    c.sig2[0] = c.sig2_tilde[0] / e1;
    c.sig2[1] = c.sig2_tilde[1] / (1.0 - e1);

    // Diode intensity couplings (signal column 0, oscillator column 1).
    c.gains[0][0] = e1 * e3 * p.eps[0];
    c.gains[0][1] = e2 * (1.0 - e3) * p.eps[0];
    c.gains[1][0] = (1.0 - e1) * e4 * p.eps[1];
    c.gains[1][1] = (1.0 - e2) * (1.0 - e4) * p.eps[1];
    c.gains[2][0] = e1 * (1.0 - e3) * p.eps[2];
    c.gains[2][1] = e2 * e3 * p.eps[2];
    c.gains[3][0] = (1.0 - e1) * (1.0 - e4) * p.eps[3];
    c.gains[3][1] = (1.0 - e2) * e4 * p.eps[3];

    c.channels = 2;
    return c;
}

Coefficients single_homodyne_params(const CircuitParams& p, double lambda_abs2) {
    if (!(p.eta[2] > 0.0 && p.eta[2] < 1.0))
        throw std::domain_error("single homodyne: eta3 must lie strictly inside (0,1)");
    for (int k : {0, 2}) {
        if (!(p.eps[k] > 0.0 && p.eps[k] <= 1.0))
            throw std::invalid_argument("single homodyne: eps" + std::to_string(k + 1) +
                                        " must lie in (0,1]");
        if (!(p.xi[k] > 0.0))
            throw std::invalid_argument("single homodyne: xi" + std::to_string(k + 1) +
                                        " must be positive");
    }

    const double e3 = p.eta[2];
    const double a1 = p.eps[0] * p.xi[0], a3 = p.eps[2] * p.xi[2];
    const double b1 = p.eps[0] * p.xi[0] * p.xi[0], b3 = p.eps[2] * p.xi[2] * p.xi[2];

    Coefficients c;
    c.lambda_abs2 = lambda_abs2;
    c.channels = 1;
    c.kappa[0][0] = e3 * b1 + (1.0 - e3) * b3;
    c.kappa[0][1] = (1.0 - e3) * b1 + e3 * b3;
    c.kappa[0][2] = std::sqrt(e3 * (1.0 - e3)) * (a1 + a3);
    c.delta[0][0] = e3 * a1 - (1.0 - e3) * a3;
    c.delta[0][1] = (1.0 - e3) * a1 - e3 * a3;
    c.delta[0][2] = std::sqrt(e3 * (1.0 - e3)) * (b1 - b3);

    if (c.kappa[0][2] == 0.0)
        throw std::domain_error("single homodyne: kappa_13 vanished");

    c.psi = {p.psi1, p.psi1};
    c.phi = 0.0;
    c.g3[0] = 0.0;
    c.g2[0] = c.delta[0][1] * std::sqrt(lambda_abs2) / c.kappa[0][2];

    c.v2_tilde[0] = c.delta[0][1] * c.delta[0][1] / (c.kappa[0][2] * c.kappa[0][2]);
    c.v2[0] = c.v2_tilde[0];
    const double q1 = p.eps[0] * (1.0 - p.eps[0]) * p.xi[0] * p.xi[0];
    const double q3 = p.eps[2] * (1.0 - p.eps[2]) * p.xi[2] * p.xi[2];
    c.sig2_tilde[0] = ((1.0 - e3) * q1 + e3 * q3) / (e3 * (1.0 - e3) * (a1 + a3) * (a1 + a3));
    c.sig2[0] = c.sig2_tilde[0];

    // One physical beam splitter: diode 1 sees eta3 of the signal and
    // (1-eta3) of the oscillator, diode 3 the complement.
    c.gains[0][0] = e3 * p.eps[0];
    c.gains[0][1] = (1.0 - e3) * p.eps[0];
    c.gains[2][0] = (1.0 - e3) * p.eps[2];
    c.gains[2][1] = e3 * p.eps[2];
    return c;
}

}  // namespace octoport
