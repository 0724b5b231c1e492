#include "octoport/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "octoport/numeric.hpp"
#include "octoport/stats.hpp"

namespace octoport {

namespace {

void check_bits(int n) {
    if (n < 2 || n > 64) throw std::invalid_argument("adc: n_bits must lie in [2,64]");
}

}  // namespace

AdcGrid resolve_adc(const AdcConfig& a, std::array<double, 2> sigma, std::array<double, 2> mean) {
    check_bits(a.n_bits);
    AdcGrid g;
    g.n_bits = a.n_bits;
    g.mu = a.mu ? *a.mu : mean;
    const double cells = std::ldexp(1.0, a.n_bits);
    for (int j = 0; j < 2; ++j) {
        if (a.range) {
            g.R[j] = (*a.range)[j];
        } else {
            if (!(sigma[j] > 0.0))
                throw std::invalid_argument("adc: multiplier ranges need positive sigma");
            g.R[j] = a.x[j] * sigma[j];
        }
        if (!(g.R[j] > 0.0)) throw std::invalid_argument("adc: range must be positive");
        g.delta[j] = 2.0 * g.R[j] / cells;
        g.x[j] = sigma[j] > 0.0 ? g.R[j] / sigma[j] : 0.0;
    }
    return g;
}

AdcGrid resolve_adc(const AdcConfig& a, const NoiseBudget& b) {
    return resolve_adc(a, {std::sqrt(b.Sigma2[0]), std::sqrt(b.Sigma2[1])}, b.mean);
}

int adc_code(double v, const AdcGrid& g, int channel) {
    if (g.n_bits > 31) throw std::invalid_argument("adc_code: n_bits > 31 unsupported");
    const double lo = g.mu[channel] - g.R[channel];
    const double z = (v - lo) / g.delta[channel];
    if (z < 0.0) return -1;
    const int cells = 1 << g.n_bits;
    if (z >= static_cast<double>(cells)) return cells;
    const int i = static_cast<int>(z);
    return i >= cells ? cells : i;
}

namespace {

struct StdGauss {
    std::array<double, 2> mean;
    std::array<double, 2> sigma;
    double rho;
};

StdGauss standardize(const NoiseBudget& b) {
    StdGauss s;
    for (int j = 0; j < 2; ++j) {
        if (!(b.Sigma2[j] > 0.0))
            throw std::domain_error("entropy: singular covariance (zero variance)");
        s.sigma[j] = std::sqrt(b.Sigma2[j]);
        s.mean[j] = b.mean[j];
    }
    s.rho = b.C[0][1] / (s.sigma[0] * s.sigma[1]);
    if (!(std::abs(s.rho) < 1.0))
        throw std::domain_error("entropy: singular covariance (|rho| >= 1)");
    return s;
}

/// Mass of the axis-aligned rectangle [a1,b1] x [a2,b2] in standardized
/// coordinates under correlation rho; positive-part decomposition, no
/// cancellation for small boxes.
double rect_mass(double a1, double b1, double a2, double b2, double rho) {
    if (rho == 0.0) {
        return (normal_cdf(b1) - normal_cdf(a1)) * (normal_cdf(b2) - normal_cdf(a2));
    }
    const double s = std::sqrt(1.0 - rho * rho);
    auto inner = [&](double z) {
        return normal_pdf(z) * (normal_cdf((b2 - rho * z) / s) - normal_cdf((a2 - rho * z) / s));
    };
    const double crude = std::max(inner(0.5 * (a1 + b1)) * (b1 - a1), 1e-280);
    return adaptive_simpson(inner, a1, b1, 1e-10 * crude);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

GuessingProb guessing_prob_numeric(const NoiseBudget& b, const AdcGrid& g) {
    const StdGauss s = standardize(b);
    if (!(b.det_C > 0.0)) throw std::domain_error("entropy: singular covariance (det <= 0)");

    // Cell mass as a function of its center, in volts.
    auto mass_at = [&](double c1, double c2) {
        const double a1 = (c1 - 0.5 * g.delta[0] - s.mean[0]) / s.sigma[0];
        const double b1 = (c1 + 0.5 * g.delta[0] - s.mean[0]) / s.sigma[0];
        const double a2 = (c2 - 0.5 * g.delta[1] - s.mean[1]) / s.sigma[1];
        const double b2 = (c2 + 0.5 * g.delta[1] - s.mean[1]) / s.sigma[1];
        return rect_mass(a1, b1, a2, b2, s.rho);
    };

    auto center_of = [&](int idx, int ch) {
        return g.mu[ch] - g.R[ch] + (idx + 0.5) * g.delta[ch];
    };
    auto clamp_cell = [&](double v, int ch) {
        const int cells = g.n_bits <= 31 ? (1 << g.n_bits) : 0;
        double z = (v - (g.mu[ch] - g.R[ch])) / g.delta[ch];
        if (g.n_bits > 31) return z;  // effectively continuous
        int i = static_cast<int>(std::floor(z));
        i = std::clamp(i, 0, cells - 1);
        return static_cast<double>(i);
    };

    // Start from the cell containing the mean, scan the +-1 neighborhood.
    const double i0 = clamp_cell(s.mean[0], 0);
    const double j0 = clamp_cell(s.mean[1], 1);
    double best = -1.0, bc1 = s.mean[0], bc2 = s.mean[1];
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            const double c1 = center_of(static_cast<int>(i0) + di, 0);
            const double c2 = center_of(static_cast<int>(j0) + dj, 1);
            const double v = mass_at(c1, c2);
            if (v > best) {
                best = v;
                bc1 = c1;
                bc2 = c2;
            }
        }
    }
    // Refine the window center within half a bin, coordinate-wise
    // golden-section; the worst-case cell alignment for a unimodal law.
    for (int round = 0; round < 3; ++round) {
        const double c2 = bc2;
        bc1 = golden_max([&](double c) { return mass_at(c, c2); }, bc1 - 0.5 * g.delta[0],
                         bc1 + 0.5 * g.delta[0], 1e-6 * g.delta[0]);
        const double c1 = bc1;
        bc2 = golden_max([&](double c) { return mass_at(c1, c); }, bc2 - 0.5 * g.delta[1],
                         bc2 + 0.5 * g.delta[1], 1e-6 * g.delta[1]);
    }
    best = std::max(best, mass_at(bc1, bc2));

    GuessingProb p;
    p.numeric = best;
    p.approx = g.delta[0] * g.delta[1] / (2.0 * pi * std::sqrt(b.det_C));
    return p;
}

HMin h_min_total(const NoiseBudget& b, const AdcGrid& g) {
    HMin h;
    h.p = guessing_prob_numeric(b, g);
    h.bits = -std::log2(h.p.numeric);
    h.bits_approx = -std::log2(h.p.approx);
    return h;
}

HRefCell h_ref_and_tables(int n, double x1, double x2) {
    check_bits(n);
    if (!(x1 > 0.0 && x2 > 0.0)) throw std::invalid_argument("h_ref: multipliers must be positive");
    HRefCell c;
    c.h_ref = 2.0 * n - 1.0 - std::log2(x1 * x2 / pi);
    const double q1 = normal_tail(x1);
    const double q2 = normal_tail(x2);
    const double p_sat = 2.0 * q1 + 2.0 * q2 - 4.0 * q1 * q2;
    const double p_guess = x1 * x2 / (pi * std::ldexp(1.0, 2 * n - 1));
    c.ratio = p_sat / p_guess;
    c.condition_ok = c.ratio < 1.0;
    return c;
}

double loss_correlation(const NoiseBudget& b) {
    const double q = b.Upsilon[0] * b.Upsilon[1] /
                     ((1.0 + b.Theta[0] + b.Upsilon[0]) * (1.0 + b.Theta[1] + b.Upsilon[1]));
    return -0.5 * std::log1p(-q) / std::log(2.0);
}

double loss_ref_minus_cond(const NoiseBudget& b, double S0, double S_minus) {
    return std::log2(S0 / S_minus) +
           0.5 * std::log2((1.0 + b.Upsilon[0] + b.Theta[0]) * (1.0 + b.Upsilon[1] + b.Theta[1]));
}

HCond h_cond_classical(const NoiseBudget& b, const AdcGrid& g, double S0, double S_minus) {
    if (!(S_minus > 0.0) || !(S0 > 0.0))
        throw std::invalid_argument("h_cond_classical: scales must be positive");
    const double core = 2.0 * pi * std::sqrt(b.shot2[0] * b.shot2[1]) / (g.delta[0] * g.delta[1]);
    HCond h;
    h.h0 = std::log2(core);
    h.bits = std::log2(core * S_minus / S0);
    h.loss_diff1 = 0.5 * std::log2(b.E12) + std::log2(S0 / S_minus);
    return h;
}

HQuantum h_lb_quantum(const Coefficients& c, const AdcGrid& g, double lambda_abs2,
                      double S_minus) {
    const double sphi = std::abs(std::sin(c.phi));
    HQuantum h;
    h.bits = std::log2(4.0 * pi * c.kappa[0][2] * c.kappa[1][2] * sphi * lambda_abs2 * S_minus /
                       (g.delta[0] * g.delta[1]));
    h.loss_diff2 =
        std::log2(std::sqrt(c.kappa[0][1] * c.kappa[1][1]) / (2.0 * c.kappa[0][2] * c.kappa[1][2] * sphi));
    h.negative = !(h.bits >= 0.0);
    return h;
}

double saturation_prob(const NoiseBudget& b, const AdcGrid& g) {
    const StdGauss s = standardize(b);
    const double za1 = (g.mu[0] - g.R[0] - s.mean[0]) / s.sigma[0];
    const double zb1 = (g.mu[0] + g.R[0] - s.mean[0]) / s.sigma[0];
    const double za2 = (g.mu[1] - g.R[1] - s.mean[1]) / s.sigma[1];
    const double zb2 = (g.mu[1] + g.R[1] - s.mean[1]) / s.sigma[1];

    const double out1 = normal_cdf(za1) + normal_tail(zb1);
    if (s.rho == 0.0) {
        const double in1 = normal_cdf(zb1) - normal_cdf(za1);
        const double out2 = normal_cdf(za2) + normal_tail(zb2);
        return out1 + in1 * out2;
    }
    const double sc = std::sqrt(1.0 - s.rho * s.rho);
    auto inner = [&](double z) {
        return normal_pdf(z) *
               (normal_cdf((za2 - s.rho * z) / sc) + normal_tail((zb2 - s.rho * z) / sc));
    };
    const double crude =
        std::max({inner(0.0) * (zb1 - za1), normal_tail(std::min(-za2, zb2)), 1e-280});
    const double cross = adaptive_simpson(inner, za1, zb1, 1e-10 * crude);
    return out1 + cross;
}

namespace {

/// Expected value of -log2(max cell count / m) when the counts are Poisson
/// with intensities m * p_cell: P(max <= k) = prod_cells P(Pois(m p) <= k).
/// `cells` holds (intensity, multiplicity) pairs.
double expected_raw_bits(const std::vector<std::pair<double, double>>& cells, double m,
                         double lambda_max) {
    const double sd = std::sqrt(lambda_max);
    const int k_lo = std::max(1, static_cast<int>(std::floor(lambda_max - 9.0 * sd)));
    const int k_hi = static_cast<int>(std::ceil(lambda_max + 9.0 * sd)) + 1;
    std::vector<double> logF(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);

    for (const auto& [lam, mult] : cells) {
        // Cells far below the max window contribute log(1) = 0.
        if (gamma_q(static_cast<double>(k_lo) + 1.0, lam) > 1.0 - 1e-15) continue;
        for (int k = k_lo; k <= k_hi; ++k) {
            const double F = gamma_q(static_cast<double>(k) + 1.0, lam);
            if (F <= 0.0) {
                logF[static_cast<std::size_t>(k - k_lo)] += -1e30;
            } else {
                logF[static_cast<std::size_t>(k - k_lo)] += mult * std::log(F);
                if (F > 1.0 - 1e-15) break;  // flat from here on
            }
        }
        // Fill the already-converged upper part with zeros implicitly: the
        // break above leaves them untouched (adds 0), which is correct.
    }

    double expect = 0.0;
    double prev = std::exp(logF[0]);
    for (int k = k_lo + 1; k <= k_hi; ++k) {
        const double cur = std::exp(logF[static_cast<std::size_t>(k - k_lo)]);
        const double pk = cur - prev;
        if (pk > 0.0) expect += pk * (-std::log2(static_cast<double>(k) / m));
        prev = cur;
    }
    // Probability mass below k_lo is negligible by construction; mass at k_lo
    // itself uses the floor bin.
    expect += std::exp(logF[0]) * (-std::log2(static_cast<double>(k_lo) / m));
    return expect;
}

}  // namespace

EmpiricalMinEntropy empirical_min_entropy(const std::vector<std::array<double, 2>>& samples,
                                          const AdcGrid& g, BiasModel model, double cp_alpha) {
    if (samples.size() < 2) throw std::invalid_argument("empirical_min_entropy: empty batch");
    if (g.n_bits > 20)
        throw std::invalid_argument("empirical_min_entropy: histogram supports n_bits <= 20");
    const int cells = 1 << g.n_bits;
    const std::uint64_t side = static_cast<std::uint64_t>(cells) + 2;

    std::unordered_map<std::uint64_t, std::uint32_t> sparse;
    std::vector<std::uint32_t> dense;
    const bool use_dense = g.n_bits <= 10;
    if (use_dense) dense.assign(side * side, 0);

    std::uint64_t saturated = 0;
    for (const auto& xy : samples) {
        const int c1 = adc_code(xy[0], g, 0);
        const int c2 = adc_code(xy[1], g, 1);
        if (c1 < 0 || c1 >= cells || c2 < 0 || c2 >= cells) ++saturated;
        const std::uint64_t key =
            static_cast<std::uint64_t>(c1 + 1) * side + static_cast<std::uint64_t>(c2 + 1);
        if (use_dense)
            ++dense[key];
        else
            ++sparse[key];
    }

    std::uint64_t maxc = 0;
    if (use_dense) {
        for (auto v : dense) maxc = std::max<std::uint64_t>(maxc, v);
    } else {
        for (const auto& [k, v] : sparse) maxc = std::max<std::uint64_t>(maxc, v);
    }

    EmpiricalMinEntropy e;
    e.m = samples.size();
    e.max_count = maxc;
    e.saturated = saturated;
    const double m = static_cast<double>(e.m);
    e.bits_raw = -std::log2(static_cast<double>(maxc) / m);
    e.p_upper = clopper_pearson_upper(maxc, e.m, cp_alpha);
    e.bits_lower = -std::log2(e.p_upper);
    e.bits = e.bits_raw;

    if (model == BiasModel::none || maxc == e.m) return e;

    std::vector<std::pair<double, double>> model_cells;
    double p_max_fit = 0.0;
    if (model == BiasModel::uniform) {
        const double p = std::ldexp(1.0, -2 * g.n_bits);
        model_cells.emplace_back(m * p, std::ldexp(1.0, 2 * g.n_bits));
        p_max_fit = p;
    } else {
        // Independent per-axis normals fitted to the data.
        std::array<double, 2> mu{0.0, 0.0}, sd{0.0, 0.0};
        for (const auto& xy : samples) {
            mu[0] += xy[0];
            mu[1] += xy[1];
        }
        mu[0] /= m;
        mu[1] /= m;
        for (const auto& xy : samples) {
            sd[0] += (xy[0] - mu[0]) * (xy[0] - mu[0]);
            sd[1] += (xy[1] - mu[1]) * (xy[1] - mu[1]);
        }
        sd[0] = std::sqrt(sd[0] / (m - 1.0));
        sd[1] = std::sqrt(sd[1] / (m - 1.0));
        if (!(sd[0] > 0.0) || !(sd[1] > 0.0)) return e;  // degenerate data, no correction

        std::array<std::vector<double>, 2> axis;
        for (int ch = 0; ch < 2; ++ch) {
            axis[ch].resize(side);
            const double lo = g.mu[ch] - g.R[ch];
            axis[ch][0] = normal_cdf((lo - mu[ch]) / sd[ch]);
            double prev = axis[ch][0];
            for (int i = 1; i <= cells; ++i) {
                const double edge = lo + g.delta[ch] * i;
                const double F = normal_cdf((edge - mu[ch]) / sd[ch]);
                axis[ch][static_cast<std::size_t>(i)] = F - prev;
                prev = F;
            }
            axis[ch][side - 1] = normal_tail((g.mu[ch] + g.R[ch] - mu[ch]) / sd[ch]);
        }

        const double q1max = *std::max_element(axis[0].begin(), axis[0].end());
        const double q2max = *std::max_element(axis[1].begin(), axis[1].end());
        p_max_fit = q1max * q2max;
        const double lam_max = m * p_max_fit;
        // Only cells whose intensity can reach the max window matter; prune
        // hard to keep the product cheap.
        const double floor_lam = std::max(0.0, lam_max - 14.0 * std::sqrt(lam_max));
        for (double qa : axis[0]) {
            if (m * qa * q2max < floor_lam) continue;
            for (double qb : axis[1]) {
                const double lam = m * qa * qb;
                if (lam >= floor_lam) model_cells.emplace_back(lam, 1.0);
            }
        }
    }

    const double h_fit = -std::log2(p_max_fit);
    const double e_raw_fit = expected_raw_bits(model_cells, m, m * p_max_fit);
    e.bits = e.bits_raw + (h_fit - e_raw_fit);
    return e;
}

EntropyReport make_entropy_report(const Coefficients& c, const NoiseBudget& b, const AdcConfig& a,
                                  double S0, double S_minus) {
    EntropyReport r;
    r.channels = 2;
    r.S0 = S0;
    r.S_minus = S_minus;
    r.grid = resolve_adc(a, b);

    const HMin hm = h_min_total(b, r.grid);
    r.h_min_total = hm.bits;
    r.h_min_total_approx = hm.bits_approx;
    r.p_guess = hm.p.numeric;

    if (r.grid.x[0] > 0.0 && r.grid.x[1] > 0.0) {
        r.h_ref = h_ref_and_tables(r.grid.n_bits, r.grid.x[0], r.grid.x[1]).h_ref;
    } else {
        r.h_ref = std::nan("");
    }

    const HCond hc = h_cond_classical(b, r.grid, S0, S_minus);
    r.h0 = hc.h0;
    r.h_cond_classical = hc.bits;
    r.loss_diff1 = hc.loss_diff1;
    r.loss_correlation = loss_correlation(b);

    const HQuantum hq = h_lb_quantum(c, r.grid, b.lambda_abs2, S_minus);
    r.h_lb_quantum = hq.bits;
    r.h_lb_negative = hq.negative;
    r.loss_diff2 = hq.loss_diff2;

    r.p_saturation = saturation_prob(b, r.grid);
    r.sat_condition_ok = r.p_saturation < r.p_guess;
    return r;
}

}  // namespace octoport
