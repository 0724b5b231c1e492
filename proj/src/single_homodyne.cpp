#include "octoport/single_homodyne.hpp"

#include <cmath>
#include <stdexcept>

#include "octoport/numeric.hpp"

namespace octoport {

SingleBudget single_budget(const Coefficients& c, double S0, double C0, double lambda_abs2,
                           double sigma_el) {
    if (c.channels != 1)
        throw std::invalid_argument("single_budget: needs single-channel coefficients");
    if (!(S0 > 0.0) || !(lambda_abs2 > 0.0))
        throw std::invalid_argument("single_budget: S0 and lambda_abs2 must be positive");
    SingleBudget b;
    b.s0 = S0;
    b.lambda_abs2 = lambda_abs2;
    b.mu1 = c.delta[0][1] * lambda_abs2;
    b.shot2 = c.kappa[0][1] * lambda_abs2 * S0;
    const double rin = c.delta[0][1] * c.delta[0][1] * lambda_abs2 * lambda_abs2 * C0;
    const double el = sigma_el * sigma_el;
    b.Upsilon1 = rin / b.shot2;
    b.Theta1 = el / b.shot2;
    b.Sigma1_2 = b.shot2 + rin + el;
    return b;
}

double h_min_single(const SingleBudget& b, int n_bits, double x1) {
    if (n_bits < 2 || n_bits > 64) throw std::invalid_argument("h_min_single: n_bits in [2,64]");
    if (!(x1 > 0.0)) throw std::invalid_argument("h_min_single: x1 must be positive");
    if (!(b.Sigma1_2 > 0.0)) throw std::domain_error("h_min_single: degenerate variance");
    // delta1 = 2 x1 Sigma1 / 2^n; Sigma cancels:
    // log2(sqrt(2 pi) Sigma1 / delta1) = n + log2(sqrt(2 pi) / (2 x1)).
    const double sigma = std::sqrt(b.Sigma1_2);
    const double delta = 2.0 * x1 * sigma / std::ldexp(1.0, n_bits);
    return std::log2(std::sqrt(2.0 * pi) * sigma / delta);
}

double h_min_single_delta(const SingleBudget& b, double delta1) {
    if (!(delta1 > 0.0)) throw std::invalid_argument("h_min_single_delta: delta1 must be positive");
    if (!(b.Sigma1_2 > 0.0)) throw std::domain_error("h_min_single_delta: degenerate variance");
    return std::log2(std::sqrt(2.0 * pi * b.Sigma1_2) / delta1);
}

SatSingle saturation_single(double x, int n_bits) {
    if (n_bits < 2 || n_bits > 64) throw std::invalid_argument("saturation_single: n_bits in [2,64]");
    SatSingle s;
    s.p_sat = 2.0 * normal_tail(x);
    s.threshold = x / (std::sqrt(pi) * std::ldexp(1.0, n_bits) / std::sqrt(2.0));
    s.condition_ok = s.p_sat < s.threshold;
    return s;
}

double loss_classical_single(double eps, double eta, double Upsilon, double Theta, double S0,
                             std::optional<double> E_inv_R) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("loss_classical_single: eps in (0,1]");
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("loss_classical_single: eta in (0,1)");
    if (!(S0 > 0.0)) throw std::invalid_argument("loss_classical_single: S0 must be positive");
    const double base = 0.5 * std::log2(1.0 + 2.0 * eps * Upsilon + Theta / (2.0 * eps));
    const double tail = E_inv_R ? std::log2(*E_inv_R * std::sqrt(S0)) : 0.0;
    return base + tail;
}

Table single_entropy_table() {
    Table t;
    t.corner = "n";
    t.rows = {8, 10, 12, 16, 32};
    t.cols = {3.0, 3.4, 4.0, 4.6, 6.1, 8.9, 9.5};
    t.cell_format = "%.2f";
    SingleBudget unit;
    unit.Sigma1_2 = 1.0;
    unit.shot2 = 1.0;
    unit.s0 = 1.0;
    unit.lambda_abs2 = 1.0;
    for (int n : t.rows) {
        std::vector<double> row;
        for (double x : t.cols) {
            const SatSingle s = saturation_single(x, n);
            row.push_back(s.condition_ok ? h_min_single(unit, n, x) : std::nan(""));
        }
        t.value.push_back(std::move(row));
    }
    return t;
}

EntropyReport make_entropy_report_single(const SingleBudget& b, int n_bits, double x1,
                                         double S_minus) {
    EntropyReport r;
    r.channels = 1;
    r.S0 = b.s0;
    r.S_minus = S_minus;

    const double sigma = std::sqrt(b.Sigma1_2);
    r.grid.n_bits = n_bits;
    r.grid.R = {x1 * sigma, 0.0};
    r.grid.delta = {2.0 * x1 * sigma / std::ldexp(1.0, n_bits), 0.0};
    r.grid.mu = {b.mu1, 0.0};
    r.grid.x = {x1, 0.0};

    r.h_min_total = h_min_single(b, n_bits, x1);
    r.h_min_total_approx = r.h_min_total;
    // Reference: shot-noise-only device, half the two-channel ledger.
    r.h_ref = n_bits + std::log2(std::sqrt(2.0 * pi) / (2.0 * x1));
    r.p_guess = std::exp2(-r.h_min_total);

    const double shot_sigma2 = b.shot2;
    r.h0 = std::log2(std::sqrt(2.0 * pi * shot_sigma2) / r.grid.delta[0]);
    const double loss1 = 0.5 * std::log2(1.0 + b.Upsilon1 + b.Theta1) + std::log2(b.s0 / S_minus);
    r.h_cond_classical = r.h_min_total - loss1;
    r.loss_diff1 = loss1;

    r.h_lb_quantum = std::nan("");
    r.h_lb_negative = false;
    r.loss_correlation = std::nan("");
    r.loss_diff2 = std::nan("");

    const SatSingle s = saturation_single(x1, n_bits);
    r.p_saturation = s.p_sat;
    r.sat_condition_ok = s.condition_ok;
    return r;
}

}  // namespace octoport
