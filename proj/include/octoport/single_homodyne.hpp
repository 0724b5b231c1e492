#pragma once

// Single (balanced two-port) homodyne reduction used as the comparison
// baseline: one difference current X1, one-dimensional quantizer, and the
// matching entropy ledger.

#include <optional>

#include "octoport/entropy.hpp"

namespace octoport {

struct SingleBudget {
    double mu1 = 0.0;       ///< Delta_12 |lambda|^2 [V]
    double Sigma1_2 = 0.0;  ///< kappa_12 |lambda|^2 S0 (1 + Upsilon1 + Theta1) [V^2]
    double Upsilon1 = 0.0;
    double Theta1 = 0.0;
    double shot2 = 0.0;     ///< kappa_12 |lambda|^2 S0
    double s0 = 0.0;
    double lambda_abs2 = 0.0;
};

/// Budget from single-channel coefficients (single_homodyne_params output).
SingleBudget single_budget(const Coefficients& c, double S0, double C0, double lambda_abs2,
                           double sigma_el);

/// H_min of the quantized single channel at multiplier x1:
/// log2(sqrt(2 pi) Sigma1 / delta1) with delta1 = 2 x1 Sigma1 / 2^n.
double h_min_single(const SingleBudget& b, int n_bits, double x1);

/// Same at a fixed bin width (doubling Sigma1 then adds exactly one bit).
double h_min_single_delta(const SingleBudget& b, double delta1);

struct SatSingle {
    double p_sat;       ///< 2 (1 - Phi(x))
    double threshold;   ///< x / (sqrt(pi) 2^{n-1/2})
    bool condition_ok;  ///< p_sat < threshold
};

SatSingle saturation_single(double x, int n_bits);

/// Classical-side-information entropy loss of the single channel:
/// 0.5 log2(1 + 2 eps Upsilon + Theta/(2 eps)) + log2(E_f[R^{-1}] sqrt(S0)).
/// E_inv_R defaults to 1/sqrt(S0) (flat-intensity limit).
double loss_classical_single(double eps, double eta, double Upsilon, double Theta, double S0,
                             std::optional<double> E_inv_R = std::nullopt);

/// Single-channel H_min over the standard (n, x) grid; blank where the
/// saturation condition fails.
Table single_entropy_table();

/// EntropyReport with channels = 1; two-channel-only fields are NaN.
EntropyReport make_entropy_report_single(const SingleBudget& b, int n_bits, double x1,
                                         double S_minus);

}  // namespace octoport
