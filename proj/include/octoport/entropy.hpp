#pragma once

// Min-entropy ledger of the quantizer output: worst-case guessing probability
// over the ADC grid, reference entropy of the balanced device, classical and
// quantum conditional bounds, the three entropy losses, and saturation
// probabilities. Also the empirical min-entropy estimator and the built-in
// reference tables.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "octoport/analytic.hpp"

namespace octoport {

/// ADC request: n-bit quantizer per channel over [mu_j - R_j, mu_j + R_j].
/// Either explicit half-ranges or multipliers x_j with R_j = x_j Sigma_j.
struct AdcConfig {
    int n_bits = 8;
    std::array<double, 2> x{4.0, 4.0};
    std::optional<std::array<double, 2>> range;  ///< explicit half-ranges [V]
    std::optional<std::array<double, 2>> mu;     ///< centering; default budget means
};

/// Resolved grid: bin width delta_j = 2 R_j / 2^n.
struct AdcGrid {
    int n_bits = 8;
    std::array<double, 2> R{0.0, 0.0};
    std::array<double, 2> delta{0.0, 0.0};
    std::array<double, 2> mu{0.0, 0.0};
    std::array<double, 2> x{0.0, 0.0};  ///< R_j / Sigma_j when Sigma known, else 0
};

/// Throws std::invalid_argument for n outside [2,64] or non-positive ranges.
AdcGrid resolve_adc(const AdcConfig& a, const NoiseBudget& b);
AdcGrid resolve_adc(const AdcConfig& a, std::array<double, 2> sigma,
                    std::array<double, 2> mean);

/// Bin index of a sample on one axis; returns -1 below range, 2^n above.
int adc_code(double v, const AdcGrid& g, int channel);

struct GuessingProb {
    double numeric;  ///< max bin mass, grid + golden-section refined
    double approx;   ///< small-delta form delta1 delta2 / (2 pi sqrt(det C))
};

/// Worst-case probability of one ADC cell under the vacuum Gaussian.
/// Throws std::domain_error on a singular covariance.
GuessingProb guessing_prob_numeric(const NoiseBudget& b, const AdcGrid& g);

struct HMin {
    double bits;         ///< -log2 of the numeric guessing probability
    double bits_approx;  ///< log2(2 pi sqrt(det C) / (delta1 delta2))
    GuessingProb p;
};

HMin h_min_total(const NoiseBudget& b, const AdcGrid& g);

/// Reference entropy of the balanced shot-noise-only device at multipliers
/// (x1, x2): H_ref = 2n - 1 - log2(x1 x2 / pi); `ratio` is the
/// saturation-to-guessing ratio whose being < 1 legitimizes the grid.
struct HRefCell {
    double h_ref;
    double ratio;
    bool condition_ok;
};

HRefCell h_ref_and_tables(int n, double x1, double x2);

/// Entropy loss from inter-channel correlation,
/// -0.5 log2[1 - U1 U2 / ((1+T1+U1)(1+T2+U2))]; bin-size independent.
double loss_correlation(const NoiseBudget& b);

/// H_ref - H_cond gap expressed budget-side: log2(S0/S-) + 0.5 log2[(1+U1+T1)(1+U2+T2)].
double loss_ref_minus_cond(const NoiseBudget& b, double S0, double S_minus);

struct HCond {
    double bits;        ///< classical conditional min-entropy
    double h0;          ///< same with S- replaced by S0
    double loss_diff1;  ///< 0.5 log2 E12 + log2(S0/S-)
};

/// H(X|classical side info) = log2[2 pi |l|^2 sqrt(k12 k22) S- / (d1 d2)];
/// independent of electronic noise by construction.
HCond h_cond_classical(const NoiseBudget& b, const AdcGrid& g, double S0, double S_minus);

struct HQuantum {
    double bits;        ///< log2[4 pi k13 k23 |sin phi| |l|^2 S- / (d1 d2)]
    double loss_diff2;  ///< log2[sqrt(k12 k22) / (2 k13 k23 |sin phi|)]
    bool negative;      ///< bound fell below zero (warning, not an error)
};

HQuantum h_lb_quantum(const Coefficients& c, const AdcGrid& g, double lambda_abs2,
                      double S_minus);

/// Probability that (X1, X2) falls outside the ADC ranges, cancellation-free,
/// correlation handled by one-dimensional adaptive quadrature.
double saturation_prob(const NoiseBudget& b, const AdcGrid& g);

/// Finite-sample correction model for the empirical estimator.
enum class BiasModel { none, fitted_normal, uniform };

struct EmpiricalMinEntropy {
    double bits_raw;        ///< -log2(max cell frequency)
    double bits;            ///< bias-corrected estimate
    double p_upper;         ///< Clopper-Pearson upper bound on the max cell mass
    double bits_lower;      ///< -log2(p_upper), conservative lower bound
    std::uint64_t max_count = 0;
    std::uint64_t m = 0;
    std::uint64_t saturated = 0;  ///< samples landing in overflow cells
};

/// Histogram estimator over the 2^n x 2^n grid plus saturation cells. The
/// corrected estimate subtracts the expected selection bias of the max cell
/// count under the chosen model of the cell probabilities.
EmpiricalMinEntropy empirical_min_entropy(const std::vector<std::array<double, 2>>& samples,
                                          const AdcGrid& g,
                                          BiasModel model = BiasModel::fitted_normal,
                                          double cp_alpha = 0.01);

/// Full ledger for one operating point.
struct EntropyReport {
    int channels = 2;
    double h_min_total = 0.0;
    double h_min_total_approx = 0.0;
    double h_ref = 0.0;
    double h0 = 0.0;
    double h_cond_classical = 0.0;
    double h_lb_quantum = 0.0;
    bool h_lb_negative = false;
    double loss_correlation = 0.0;
    double loss_diff1 = 0.0;
    double loss_diff2 = 0.0;
    double p_guess = 0.0;
    double p_saturation = 0.0;
    bool sat_condition_ok = false;  ///< p_saturation < p_guess
    double S0 = 0.0;
    double S_minus = 0.0;
    AdcGrid grid;
};

EntropyReport make_entropy_report(const Coefficients& c, const NoiseBudget& b,
                                  const AdcConfig& a, double S0, double S_minus);

std::string to_json(const EntropyReport& r);

/// Rectangular table with possible blank cells (NaN).
struct Table {
    std::string corner;           ///< header of the row-label column
    std::vector<int> rows;        ///< ADC resolutions n
    std::vector<double> cols;     ///< range multipliers x
    std::vector<std::vector<double>> value;  ///< [row][col], NaN = blank
    const char* cell_format = "%.2f";
};

/// Reference entropies H_ref over the standard (n, x) grid; cells whose
/// saturation condition fails are blank.
Table href_table();

/// Saturation-to-guessing ratio over the same grid, all cells, 2 significant
/// figures.
Table ratio_table();

void write_table_csv(const Table& t, std::ostream& os);
void write_table_text(const Table& t, std::ostream& os);

/// Loss-versus-quantum-loss curve data for a family of splitting ratios.
/// Rows: eps from 1.00 down to 0.50 (quantum loss percentage 0..50);
/// one column per eta. kind selects the formula family.
enum class LossCurve { correlation, classical, quantum, single };

struct CurveSet {
    LossCurve kind;
    std::vector<double> eps;
    std::vector<double> eta;
    std::vector<std::vector<double>> value;  ///< [eps][eta]
};

/// base_upsilon = |lambda|^2 C0 / (2 S0) of the operating point (the reduced
/// Upsilon is (1-2 eta)^2 times this); Theta as in the reduced budget; the
/// quantum curve uses |sin phi| = 1.
CurveSet loss_curves(LossCurve kind, const std::vector<double>& eta, double base_upsilon,
                     double Theta);

void write_curves_csv(const CurveSet& s, std::ostream& os);

}  // namespace octoport
