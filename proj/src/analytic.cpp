#include "octoport/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "octoport/numeric.hpp"

namespace octoport {

NoiseBudget vacuum_budget(const Coefficients& c, double S0, double C0, double lambda_abs2,
                          std::array<double, 2> sigma_el) {
    if (!(S0 > 0.0)) throw std::invalid_argument("vacuum_budget: S0 must be positive");
    if (C0 < 0.0) throw std::invalid_argument("vacuum_budget: C0 must be >= 0");
    if (!(lambda_abs2 > 0.0)) throw std::invalid_argument("vacuum_budget: lambda_abs2 must be positive");

    NoiseBudget b;
    b.s0 = S0;
    b.c0 = C0;
    b.lambda_abs2 = lambda_abs2;
    const double l4 = lambda_abs2 * lambda_abs2;
    for (int j = 0; j < 2; ++j) {
        b.mean[j] = c.delta[j][1] * lambda_abs2;
        b.shot2[j] = c.kappa[j][1] * lambda_abs2 * S0;
        b.quad2[j] = c.kappa[j][2] * c.kappa[j][2] * lambda_abs2 * S0;
        const double rin = c.delta[j][1] * c.delta[j][1] * l4 * C0;
        const double el = sigma_el[j] * sigma_el[j];
        b.Sigma2[j] = b.shot2[j] + rin + el;
        b.Upsilon[j] = rin / b.shot2[j];
        b.Theta[j] = el / b.shot2[j];
        b.C[j][j] = b.Sigma2[j];
    }
    b.C[0][1] = b.C[1][0] = c.delta[0][1] * c.delta[1][1] * l4 * C0;
    b.E12 = (1.0 + b.Theta[0]) * (1.0 + b.Theta[1]) + (1.0 + b.Theta[0]) * b.Upsilon[1] +
            (1.0 + b.Theta[1]) * b.Upsilon[0];
    b.det_C = b.shot2[0] * b.shot2[1] * b.E12;
    return b;
}

double simplified_upsilon(double eta, double lambda_abs2, double C0, double S0) {
    const double d = 1.0 - 2.0 * eta;
    return d * d * lambda_abs2 * C0 / (2.0 * S0);
}

NoiseBudget simplified_budget(double eta, double eps, double xi, double Upsilon, double Theta,
                              double S0, double lambda_abs2) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("simplified_budget: eta in (0,1)");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("simplified_budget: eps in (0,1]");

    NoiseBudget b;
    b.s0 = S0;
    b.lambda_abs2 = lambda_abs2;
    // C0 consistent with the requested Upsilon: U = (1-2 eta)^2 |l|^2 C0/(2 S0).
    const double d = 1.0 - 2.0 * eta;
    b.c0 = d != 0.0 ? 2.0 * S0 * Upsilon / (d * d * lambda_abs2) : 0.0;

    const double kappa2 = eps * xi * xi / 2.0;
    const double delta2 = eps * xi * d / 2.0;
    const double kappa3 = eps * xi * std::sqrt(eta * (1.0 - eta));
    for (int j = 0; j < 2; ++j) {
        b.mean[j] = delta2 * lambda_abs2;
        b.shot2[j] = kappa2 * lambda_abs2 * S0;
        b.quad2[j] = kappa3 * kappa3 * lambda_abs2 * S0;
        b.Upsilon[j] = eps * Upsilon;
        b.Theta[j] = Theta / eps;
        b.Sigma2[j] = b.shot2[j] * (1.0 + b.Upsilon[j] + b.Theta[j]);
        b.C[j][j] = b.Sigma2[j];
    }
    b.C[0][1] = b.C[1][0] = b.shot2[0] * eps * Upsilon;
    b.E12 = (1.0 + b.Theta[0]) * (1.0 + b.Theta[1]) + (1.0 + b.Theta[0]) * b.Upsilon[1] +
            (1.0 + b.Theta[1]) * b.Upsilon[0];
    b.det_C = b.shot2[0] * b.shot2[1] * b.E12;
    return b;
}

std::array<double, 2> coherent_means(const Coefficients& c, const LaserParams& laser,
                                     const DetectorParams& det,
                                     const std::function<std::complex<double>(double)>& fs_baseband,
                                     double t) {
    validate(laser);
    const double theta = laser.fixed_theta.value_or(0.0);
    const double lam = std::sqrt(laser.lambda_abs2);
    const double kappa = det.kappa_resp;

    std::array<double, 2> out{0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        auto integrand = [&](double r) {
            const double h = kappa * std::exp(-kappa * (t - r));
            double val = c.delta[j][1] * laser.lambda_abs2;
            if (fs_baseband) {
                const std::complex<double> fs = fs_baseband(r);
                // E[f(r)] in the co-rotating frame: lam w e^{i theta} e^{-gamma0 r}.
                const std::complex<double> ef =
                    std::polar(lam * laser.w, theta) * std::exp(-laser.gamma0 * r);
                const std::complex<double> cross =
                    std::complex<double>(0.0, 1.0) * std::polar(1.0, c.psi[j]) * ef *
                    std::conj(fs);
                val += c.kappa[j][2] * 2.0 * cross.real();
                val += c.delta[j][0] * std::norm(fs);
            }
            return h * val;
        };
        // Tolerance scaled to the integrand magnitude; 1e-10 on the
        // unit-normalized problem.
        double scale = std::abs(c.delta[j][1]) * laser.lambda_abs2;
        if (fs_baseband) {
            const std::complex<double> fs0 = fs_baseband(t);
            scale += 2.0 * c.kappa[j][2] * lam * std::abs(fs0) +
                     std::abs(c.delta[j][0]) * std::norm(fs0);
        }
        if (scale == 0.0) scale = 1.0;
        out[j] = adaptive_simpson(integrand, 0.0, t, 1e-10 * scale);
    }
    return out;
}

DensityBound density_bound_check(const Coefficients& c, double r_l2, double phi) {
    if (!(r_l2 > 0.0)) throw std::invalid_argument("density_bound_check: R^2 must be positive");
    const double s = std::abs(std::sin(phi));
    if (s < 1e-300) throw std::domain_error("density_bound_check: sin(phi) = 0, bound undefined");
    DensityBound r;
    r.bound = 1.0 / (4.0 * pi * r_l2 * c.kappa[0][2] * c.kappa[1][2] * s);
    r.vacuum_peak = 1.0 / std::sqrt(2.0 * pi * c.kappa[0][1] * r_l2) /
                    std::sqrt(2.0 * pi * c.kappa[1][1] * r_l2);
    r.ok = r.vacuum_peak <= r.bound * (1.0 + 1e-12);
    return r;
}

}  // namespace octoport
