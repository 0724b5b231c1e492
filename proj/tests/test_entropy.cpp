#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "octoport/entropy.hpp"
#include "octoport/numeric.hpp"

using namespace octoport;

namespace {

NoiseBudget direct_budget(double s1sq, double s2sq, double rho, double m1, double m2) {
    NoiseBudget b;
    b.mean = {m1, m2};
    b.Sigma2 = {s1sq, s2sq};
    b.C[0][0] = s1sq;
    b.C[1][1] = s2sq;
    b.C[0][1] = b.C[1][0] = rho * std::sqrt(s1sq * s2sq);
    b.det_C = s1sq * s2sq * (1.0 - rho * rho);
    return b;
}

NoiseBudget random_vacuum_budget(Rng& rng, Coefficients* out_c = nullptr) {
    CircuitParams p;
    for (int k = 0; k < 4; ++k) {
        p.eta[k] = 0.15 + 0.7 * rng.uniform();
        p.eps[k] = 0.4 + 0.6 * rng.uniform();
        p.xi[k] = 0.5 + rng.uniform();
    }
    p.psi2 = 0.2 + 2.5 * rng.uniform();
    const double lam2 = 1e5 * (1.0 + rng.uniform());
    const Coefficients c = derive_coefficients(p, lam2);
    if (out_c) *out_c = c;
    return vacuum_budget(c, 400.0, 0.02 * rng.uniform(), lam2,
                         {5.0 * rng.uniform(), 5.0 * rng.uniform()});
}

}  // namespace

TEST_CASE("guessing probability of the correlated worked example") {
    const NoiseBudget b = direct_budget(2.0, 1.5, 0.3, 0.3, -0.4);
    AdcConfig a;
    a.n_bits = 5;
    a.x = {4.0, 4.0};
    const AdcGrid g = resolve_adc(a, b);
    CHECK(g.delta[0] == doctest::Approx(8.0 * std::sqrt(2.0) / 32.0).epsilon(1e-15));
    CHECK(g.mu[0] == doctest::Approx(0.3).epsilon(1e-15));

    const GuessingProb p = guessing_prob_numeric(b, g);
    // scipy.integrate.dblquad over the mean-centered cell (notes oracle run,
    // block D); the centered window is the optimizer for this density.
    CHECK(p.numeric == doctest::Approx(1.0368054562639074e-02).epsilon(1e-8));
    CHECK(p.approx == doctest::Approx(1.0427482095785857e-02).epsilon(1e-12));
    CHECK(p.numeric < p.approx);

    const HMin h = h_min_total(b, g);
    CHECK(h.bits == doctest::Approx(-std::log2(p.numeric)).epsilon(1e-12));
    CHECK(h.bits >= h.bits_approx);
}

TEST_CASE("guessing probability converges to the small-bin form") {
    const NoiseBudget b = direct_budget(2.0, 1.5, 0.3, 0.3, -0.4);
    AdcConfig a;
    a.n_bits = 20;
    const AdcGrid g = resolve_adc(a, b);
    const GuessingProb p = guessing_prob_numeric(b, g);
    CHECK(p.numeric / p.approx == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(p.numeric <= p.approx * (1.0 + 1e-12));
}

TEST_CASE("grid resolution, explicit ranges and code mapping") {
    AdcConfig a;
    a.n_bits = 3;
    a.range = std::array<double, 2>{1.0, 2.0};
    a.mu = std::array<double, 2>{0.5, -1.0};
    const AdcGrid g = resolve_adc(a, {2.0, 2.0}, {9.0, 9.0});
    CHECK(g.R[0] == 1.0);
    CHECK(g.R[1] == 2.0);
    CHECK(g.mu[0] == 0.5);
    CHECK(g.delta[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.x[0] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(adc_code(0.5 - 1.1, g, 0) == -1);
    CHECK(adc_code(0.5 + 1.1, g, 0) == 8);
    CHECK(adc_code(0.5 - 0.99, g, 0) == 0);
    CHECK(adc_code(0.5 + 0.99, g, 0) == 7);
    CHECK(adc_code(0.51, g, 0) == 4);

    AdcConfig bad;
    bad.n_bits = 1;
    CHECK_THROWS_AS(resolve_adc(bad, {1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
    bad.n_bits = 65;
    CHECK_THROWS_AS(resolve_adc(bad, {1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
    AdcConfig neg;
    neg.range = std::array<double, 2>{-1.0, 1.0};
    CHECK_THROWS_AS(resolve_adc(neg, {1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("reference cell entropy and legitimacy ratio") {
    const HRefCell r = h_ref_and_tables(8, 4.0, 4.0);
    // 2n - 1 - log2(x1 x2 / pi) evaluated offline (notes oracle run, block I).
    CHECK(r.h_ref == doctest::Approx(12.651496129472319).epsilon(1e-12));
    CHECK(r.condition_ok);
    // ratio = p_sat / p_guess with Q(4) = 3.167124183311986e-05 (scipy
    // norm.sf): prints as 0.82 in the reference table.
    const double q = 3.167124183311986e-05;
    const double p_sat = 4.0 * q - 4.0 * q * q;
    const double p_guess = 16.0 / (pi * std::ldexp(1.0, 15));
    CHECK(r.ratio == doctest::Approx(p_sat / p_guess).epsilon(1e-10));
    CHECK_FALSE(h_ref_and_tables(8, 2.5, 2.5).condition_ok);
    CHECK(h_ref_and_tables(16, 4.0, 4.0).h_ref ==
          doctest::Approx(r.h_ref + 16.0).epsilon(1e-12));
}

TEST_CASE("conditional bounds and loss identities on random budgets") {
    Rng rng(9090);
    for (int i = 0; i < 200; ++i) {
        Coefficients c;
        const NoiseBudget b = random_vacuum_budget(rng, &c);
        const double S0 = b.s0;
        const double Sm = S0 * (0.3 + 0.7 * rng.uniform());
        AdcConfig a;
        a.n_bits = 8;
        const AdcGrid g = resolve_adc(a, b);

        const HMin hm = h_min_total(b, g);
        const HCond hc = h_cond_classical(b, g, S0, Sm);
        const HQuantum hq = h_lb_quantum(c, g, b.lambda_abs2, Sm);

        // Direct transcription of the conditional bound.
        const double want_hc =
            std::log2(2.0 * pi * std::sqrt(b.shot2[0] * b.shot2[1]) * Sm /
                      (S0 * g.delta[0] * g.delta[1]));
        CHECK(hc.bits == doctest::Approx(want_hc).epsilon(1e-10));
        CHECK(hc.h0 - hc.bits == doctest::Approx(std::log2(S0 / Sm)).epsilon(1e-10));
        CHECK(hc.loss_diff1 ==
              doctest::Approx(0.5 * std::log2(b.E12) + std::log2(S0 / Sm)).epsilon(1e-10));

        // Chained gap identities between the ledger entries.
        CHECK(hm.bits_approx - hc.bits == doctest::Approx(hc.loss_diff1).epsilon(1e-8));
        CHECK(hc.bits - hq.bits == doctest::Approx(hq.loss_diff2).epsilon(1e-8));
        CHECK(hq.loss_diff2 >= -1e-12);

        // Orderings that hold for every parameter draw.
        CHECK(hm.bits >= hm.bits_approx - 1e-9);
        CHECK(hm.bits_approx >= hc.bits - 1e-9);

        // h_ref - h_cond expressed through the budget ratios.
        const HRefCell ref = h_ref_and_tables(8, g.x[0], g.x[1]);
        const double gap = loss_ref_minus_cond(b, S0, Sm);
        CHECK(ref.h_ref - hc.bits == doctest::Approx(gap).epsilon(1e-8));
        const double want_gap =
            std::log2(S0 / Sm) + 0.5 * std::log2((1.0 + b.Upsilon[0] + b.Theta[0]) *
                                                 (1.0 + b.Upsilon[1] + b.Theta[1]));
        CHECK(gap == doctest::Approx(want_gap).epsilon(1e-10));

        const double lc = loss_correlation(b);
        const double want_lc =
            -0.5 * std::log2(1.0 - b.Upsilon[0] * b.Upsilon[1] /
                                       ((1.0 + b.Theta[0] + b.Upsilon[0]) *
                                        (1.0 + b.Theta[1] + b.Upsilon[1])));
        CHECK(lc == doctest::Approx(want_lc).epsilon(1e-10));
        CHECK(lc >= 0.0);
    }
}

TEST_CASE("vacuum ledger is blind to the first splitter and the phases") {
    AdcConfig a;
    CircuitParams p;
    p.eta = {0.31, 0.5, 0.45, 0.5};
    p.eps = {0.9, 0.8, 0.85, 0.95};
    p.psi2 = 1.2;
    const Coefficients c1 = derive_coefficients(p, 1e6);
    const NoiseBudget b1 = vacuum_budget(c1, 500.0, 0.01, 1e6, {1.0, 1.0});
    const double h1 = h_min_total(b1, resolve_adc(a, b1)).bits;

    p.eta[0] = 0.77;
    p.psi1 = 0.9;
    p.psi2 = -2.1;
    const Coefficients c2 = derive_coefficients(p, 1e6);
    const NoiseBudget b2 = vacuum_budget(c2, 500.0, 0.01, 1e6, {1.0, 1.0});
    const double h2 = h_min_total(b2, resolve_adc(a, b2)).bits;
    CHECK(h1 == h2);  // bitwise: same budget enters both
}

TEST_CASE("losses do not depend on the bin size, conditional entropy does") {
    Rng rng(515);
    Coefficients c;
    const NoiseBudget b = random_vacuum_budget(rng, &c);
    const double Sm = 0.8 * b.s0;
    AdcConfig wide, narrow;
    wide.n_bits = narrow.n_bits = 8;
    wide.x = {4.0, 4.0};
    narrow.x = {2.0, 2.0};
    const AdcGrid gw = resolve_adc(wide, b);
    const AdcGrid gn = resolve_adc(narrow, b);

    const HCond cw = h_cond_classical(b, gw, b.s0, Sm);
    const HCond cn = h_cond_classical(b, gn, b.s0, Sm);
    CHECK(cn.bits - cw.bits == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cw.loss_diff1 == cn.loss_diff1);
    CHECK(h_lb_quantum(c, gw, b.lambda_abs2, Sm).loss_diff2 ==
          h_lb_quantum(c, gn, b.lambda_abs2, Sm).loss_diff2);
}

TEST_CASE("saturation probability, independent and correlated") {
    // Uncorrelated case: union of the two per-axis tail events.
    const NoiseBudget b0 = direct_budget(1.0, 1.0, 0.0, 0.0, 0.0);
    AdcConfig a6;
    a6.x = {6.0, 6.0};
    const double q6 = 9.865876450376946e-10;  // scipy norm.sf(6)
    CHECK(saturation_prob(b0, resolve_adc(a6, b0)) ==
          doctest::Approx(4.0 * q6 - 4.0 * q6 * q6).epsilon(1e-9));

    // Correlated case against a midpoint-rule double quadrature of the
    // standardized bivariate normal over the in-range box.
    const NoiseBudget b = direct_budget(2.0, 1.5, 0.3, 0.3, -0.4);
    AdcConfig a;
    a.x = {2.5, 2.2};
    const double rho = 0.3;
    const int n = 600;
    const double h1 = 2.0 * 2.5 / n, h2 = 2.0 * 2.2 / n;
    const double norm = 1.0 / (2.0 * pi * std::sqrt(1.0 - rho * rho));
    double p_in = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z1 = -2.5 + (i + 0.5) * h1;
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double z2 = -2.2 + (j + 0.5) * h2;
            row += std::exp(-(z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) /
                            (2.0 * (1.0 - rho * rho)));
        }
        p_in += row;
    }
    p_in *= norm * h1 * h2;
    CHECK(saturation_prob(b, resolve_adc(a, b)) ==
          doctest::Approx(1.0 - p_in).epsilon(1e-4));
}

TEST_CASE("full report wiring at a balanced shot-noise-only point") {
    CircuitParams p;
    p.psi2 = 0.5 * pi;
    const Coefficients c = derive_coefficients(p, 1e6);
    const NoiseBudget b = vacuum_budget(c, 500.0, 0.0, 1e6, {0.0, 0.0});
    AdcConfig a;
    const EntropyReport r = make_entropy_report(c, b, a, 500.0, 500.0);

    CHECK(r.channels == 2);
    CHECK(r.h_ref == doctest::Approx(12.651496129472319).epsilon(1e-12));
    CHECK(r.loss_correlation == 0.0);
    CHECK(r.loss_diff1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.loss_diff2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.h_cond_classical == doctest::Approx(r.h_ref).epsilon(1e-10));
    CHECK(r.h_lb_quantum == doctest::Approx(r.h_ref).epsilon(1e-10));
    CHECK(r.h_min_total >= r.h_min_total_approx);
    CHECK(r.h_min_total_approx == doctest::Approx(r.h_ref).epsilon(1e-6));
    CHECK(r.sat_condition_ok);
    CHECK_FALSE(r.h_lb_negative);
    CHECK(r.S_minus == 500.0);
}

TEST_CASE("doubling one variance at a fixed range adds half a bit") {
    const NoiseBudget b1 = direct_budget(1.0, 1.0, 0.0, 0.0, 0.0);
    const NoiseBudget b2 = direct_budget(2.0, 1.0, 0.0, 0.0, 0.0);
    AdcConfig a;
    a.n_bits = 10;
    a.range = std::array<double, 2>{5.0, 5.0};
    const HMin h1 = h_min_total(b1, resolve_adc(a, b1));
    const HMin h2 = h_min_total(b2, resolve_adc(a, b2));
    CHECK(h2.bits_approx - h1.bits_approx == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("empirical estimator: degenerate, uniform and normal data") {
    AdcConfig a4;
    a4.n_bits = 4;
    a4.range = std::array<double, 2>{1.0, 1.0};
    a4.mu = std::array<double, 2>{0.0, 0.0};
    const AdcGrid g4 = resolve_adc(a4, {1.0, 1.0}, {0.0, 0.0});

    // All samples in one cell: zero entropy, no correction possible.
    std::vector<std::array<double, 2>> same(100, {0.01, 0.01});
    const EmpiricalMinEntropy e0 = empirical_min_entropy(same, g4);
    CHECK(e0.bits_raw == 0.0);
    CHECK(e0.bits == 0.0);
    CHECK(e0.max_count == 100);
    CHECK(e0.saturated == 0);
    CHECK(e0.bits_lower <= e0.bits_raw + 1e-12);

    // Uniform box data on a 16 x 16 grid: corrected estimate recovers 8 bits.
    Rng rng(2024);
    std::vector<std::array<double, 2>> uni(10240);
    for (auto& s : uni) s = {-1.0 + 2.0 * rng.uniform(), -1.0 + 2.0 * rng.uniform()};
    const EmpiricalMinEntropy eu = empirical_min_entropy(uni, g4, BiasModel::uniform);
    CHECK(eu.saturated == 0);
    CHECK(eu.bits_raw < 8.0);  // selection bias always loses bits
    CHECK(eu.bits == doctest::Approx(8.0).epsilon(0.25 / 8.0));
    const EmpiricalMinEntropy en = empirical_min_entropy(uni, g4, BiasModel::none);
    CHECK(en.bits == en.bits_raw);
    CHECK(eu.bits_lower <= eu.bits_raw + 1e-12);

    // Gaussian data, fitted-normal correction, against the exact cell mass.
    AdcConfig a6;
    a6.n_bits = 6;
    const AdcGrid g6 = resolve_adc(a6, {1.0, 1.0}, {0.0, 0.0});
    std::vector<std::array<double, 2>> gs(200000);
    for (auto& s : gs) s = {rng.normal(), rng.normal()};
    const EmpiricalMinEntropy eg = empirical_min_entropy(gs, g6);
    const double q_axis = normal_cdf(0.125) - 0.5;  // mean sits on a cell edge
    const double h_true = -std::log2(q_axis * q_axis);
    CHECK(eg.bits_raw < h_true);
    CHECK(std::abs(eg.bits - h_true) < 0.12);

    CHECK_THROWS_AS(empirical_min_entropy({}, g4), std::invalid_argument);
}
