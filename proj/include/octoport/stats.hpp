#pragma once

// Classical statistical routines used by the estimators and the test suites:
// regularized incomplete gamma/beta, Clopper-Pearson binomial bound,
// Kolmogorov-Smirnov and chi-square goodness-of-fit, NIST-style bitstream
// checks, and jackknife standard errors for second moments.

#include <cstdint>
#include <functional>
#include <vector>

namespace octoport {

/// Regularized lower incomplete gamma P(a,x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a,b).
double inc_beta(double a, double b, double x);

/// Upper Clopper-Pearson bound for a binomial proportion: smallest p with
/// P[Bin(n,p) <= k] <= alpha.
double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double alpha);

/// Kolmogorov distribution tail Q_KS(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
    double statistic;  ///< sup-norm distance D_n
    double p_value;    ///< Stephens-corrected asymptotic p
};

/// One-sample KS test of `data` (modified in place by sorting a copy) against
/// a continuous CDF.
KsResult ks_test(std::vector<double> data, const std::function<double(double)>& cdf);

/// Chi-square goodness-of-fit p-value from observed counts and expected counts.
double chi_square_gof_p(const std::vector<double>& observed, const std::vector<double>& expected);

/// NIST frequency (monobit) test p-value for a packed bitstream.
double monobit_p(const std::vector<std::uint8_t>& bytes, std::size_t nbits);

/// NIST runs test p-value (assumes the monobit test is not badly failed).
double runs_p(const std::vector<std::uint8_t>& bytes, std::size_t nbits);

struct MeanVar {
    double mean;
    double var;       ///< unbiased
    double mean_se;   ///< s / sqrt(n)
    double var_se;    ///< jackknife
};

MeanVar mean_var(const std::vector<double>& x);

/// Unbiased sample covariance of paired data with a delete-1 jackknife s.e.
struct CovEst {
    double cov;
    double se;
};

CovEst covariance(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace octoport
