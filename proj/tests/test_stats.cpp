#include "doctest.h"

#include <cmath>
#include <vector>

#include "octoport/numeric.hpp"
#include "octoport/stats.hpp"

using namespace octoport;

TEST_CASE("incomplete gamma against scipy references") {
    // scipy.special.gammainc / gammaincc
    CHECK(gamma_p(2.5, 1.3) == doctest::Approx(2.3863473215498604e-01).epsilon(1e-12));
    CHECK(gamma_q(0.5, 4.0) == doctest::Approx(4.6777349810472758e-03).epsilon(1e-12));
    CHECK(gamma_p(8.0, 7.5) == doctest::Approx(4.7536147351239455e-01).epsilon(1e-12));
    CHECK(gamma_p(1.0, 0.0) == doctest::Approx(0.0));
    CHECK(gamma_p(3.0, 2.0) + gamma_q(3.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("incomplete beta against scipy references") {
    // scipy.special.betainc
    CHECK(inc_beta(2.0, 3.0, 0.4) == doctest::Approx(5.2479999999999993e-01).epsilon(1e-12));
    CHECK(inc_beta(5.5, 0.7, 0.9) == doctest::Approx(4.0734215615104247e-01).epsilon(1e-12));
    CHECK(inc_beta(2.0, 3.0, 0.0) == doctest::Approx(0.0));
    CHECK(inc_beta(2.0, 3.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("clopper-pearson upper bound against scipy beta quantiles") {
    // scipy.stats.beta.ppf(1-alpha, k+1, n-k)
    CHECK(clopper_pearson_upper(5, 100, 0.01) ==
          doctest::Approx(1.2585173069767863e-01).epsilon(1e-9));
    CHECK(clopper_pearson_upper(0, 50, 0.05) ==
          doctest::Approx(5.8155079116972257e-02).epsilon(1e-9));
    CHECK(clopper_pearson_upper(50, 50, 0.05) == doctest::Approx(1.0));
}

TEST_CASE("kolmogorov tail against scipy kstwobign") {
    CHECK(kolmogorov_q(0.5) == doctest::Approx(9.6394524366487511e-01).epsilon(1e-10));
    CHECK(kolmogorov_q(1.0) == doctest::Approx(2.6999967167735456e-01).epsilon(1e-10));
    CHECK(kolmogorov_q(2.0) == doctest::Approx(6.7092525577969533e-04).epsilon(1e-10));
}

TEST_CASE("ks test accepts matching samples and rejects shifted ones") {
    Rng rng(501);
    std::vector<double> z(4000);
    for (auto& v : z) v = rng.normal();
    const auto ok = ks_test(z, [](double x) { return normal_cdf(x); });
    CHECK(ok.p_value > 0.01);
    for (auto& v : z) v += 0.5;
    const auto bad = ks_test(z, [](double x) { return normal_cdf(x); });
    CHECK(bad.p_value < 1e-6);
}

TEST_CASE("chi-square goodness of fit") {
    // scipy.stats.chi2.sf(5.0, 1), chi2.sf(12.5, 7)
    const double p1 = chi_square_gof_p({15.0, 5.0}, {10.0, 10.0});
    CHECK(p1 == doctest::Approx(2.5347318677468325e-02).epsilon(1e-10));
    const double p0 = chi_square_gof_p({10.0, 10.0, 10.0}, {10.0, 10.0, 10.0});
    CHECK(p0 == doctest::Approx(1.0).epsilon(1e-12));
}

namespace {

std::vector<std::uint8_t> pack_bits(const std::vector<int>& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return bytes;
}

}  // namespace

TEST_CASE("monobit and runs on the published worked examples") {
    // Reference p-values 0.527089 and 0.147232 for these 10-bit strings.
    const std::vector<int> m_bits{1, 0, 1, 1, 0, 1, 0, 1, 0, 1};
    CHECK(monobit_p(pack_bits(m_bits), 10) == doctest::Approx(0.527089).epsilon(1e-5));
    const std::vector<int> r_bits{1, 0, 0, 1, 1, 0, 1, 0, 1, 1};
    CHECK(runs_p(pack_bits(r_bits), 10) == doctest::Approx(0.147232).epsilon(1e-5));
}

TEST_CASE("monobit and runs pass on rng output and fail on constants") {
    Rng rng(99);
    std::vector<std::uint8_t> bytes(4096);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.u64() & 0xff);
    CHECK(monobit_p(bytes, bytes.size() * 8) > 0.01);
    CHECK(runs_p(bytes, bytes.size() * 8) > 0.01);
    std::vector<std::uint8_t> zeros(4096, 0);
    CHECK(monobit_p(zeros, zeros.size() * 8) < 1e-10);
}

TEST_CASE("mean_var matches closed-form sums and jackknife s.e. is sane") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 10.0};
    const MeanVar mv = mean_var(x);
    CHECK(mv.mean == doctest::Approx(4.0).epsilon(1e-15));
    // Unbiased variance: sum of squared deviations 50 over n-1 = 4.
    CHECK(mv.var == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(mv.mean_se == doctest::Approx(std::sqrt(12.5 / 5.0)).epsilon(1e-12));
    CHECK(mv.var_se > 0.0);
}

TEST_CASE("covariance matches closed form on a small batch") {
    const std::vector<double> x{1.0, 3.0, 5.0};
    const std::vector<double> y{2.0, 4.0, 9.0};
    const CovEst c = covariance(x, y);
    CHECK(c.cov == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(c.se > 0.0);
}

TEST_CASE("jackknife variance s.e. tracks the normal-theory value") {
    Rng rng(11);
    std::vector<double> z(20000);
    for (auto& v : z) v = rng.normal();
    const MeanVar mv = mean_var(z);
    // For normal data Var(s^2) ~ 2 sigma^4 / n.
    const double theory = std::sqrt(2.0 / z.size());
    CHECK(mv.var_se == doctest::Approx(theory).epsilon(0.15));
}
