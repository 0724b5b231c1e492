#include "octoport/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "octoport/numeric.hpp"

namespace octoport {

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

namespace {

double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

}  // namespace

double inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("inc_beta: bad shape");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double alpha) {
    if (n == 0) throw std::invalid_argument("clopper_pearson_upper: n = 0");
    if (k >= n) return 1.0;
    // P[Bin(n,p) <= k] = I_{1-p}(n-k, k+1), strictly decreasing in p.
    const double a = static_cast<double>(n - k);
    const double b = static_cast<double>(k + 1);
    double lo = static_cast<double>(k) / static_cast<double>(n);
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double tail = inc_beta(a, b, 1.0 - mid);
        if (tail > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_test(std::vector<double> data, const std::function<double(double)>& cdf) {
    if (data.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double F = cdf(data[i]);
        d = std::max(d, F - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - F);
    }
    const double sn = std::sqrt(n);
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    return {d, kolmogorov_q(lambda)};
}

double chi_square_gof_p(const std::vector<double>& observed, const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof_p: size mismatch");
    double t = 0.0;
    int dof = -1;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw std::invalid_argument("chi_square_gof_p: zero expectation");
        const double r = observed[i] - expected[i];
        t += r * r / expected[i];
        ++dof;
    }
    if (dof < 1) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * t);
}

namespace {

inline bool bit_at(const std::vector<std::uint8_t>& bytes, std::size_t i) {
    return (bytes[i >> 3] >> (i & 7)) & 1u;
}

}  // namespace

double monobit_p(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    if (nbits == 0 || bytes.size() * 8 < nbits) throw std::invalid_argument("monobit_p: bad length");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < nbits; ++i) s += bit_at(bytes, i) ? 1 : -1;
    const double sobs = std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(nbits));
    return std::erfc(sobs / std::sqrt(2.0));
}

double runs_p(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    if (nbits < 2 || bytes.size() * 8 < nbits) throw std::invalid_argument("runs_p: bad length");
    std::size_t ones = 0;
    for (std::size_t i = 0; i < nbits; ++i) ones += bit_at(bytes, i);
    const double n = static_cast<double>(nbits);
    const double prop = static_cast<double>(ones) / n;
    if (std::abs(prop - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
    std::size_t v = 1;
    for (std::size_t i = 0; i + 1 < nbits; ++i) v += bit_at(bytes, i) != bit_at(bytes, i + 1);
    const double num = std::abs(static_cast<double>(v) - 2.0 * n * prop * (1.0 - prop));
    const double den = 2.0 * std::sqrt(2.0 * n) * prop * (1.0 - prop);
    return std::erfc(num / den);
}

MeanVar mean_var(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("mean_var: need at least 3 points");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double s2 = 0.0;
    for (double v : x) {
        const double c = v - mean;
        s2 += c * c;
    }
    const double var = s2 / static_cast<double>(n - 1);

    // Delete-1 jackknife of the unbiased variance, O(1) per point from sums
    // of the centered data.
    const double nd = static_cast<double>(n);
    double jsum = 0.0, jsum2 = 0.0;
    for (double v : x) {
        const double c = v - mean;
        const double vi = (s2 - c * c - c * c / (nd - 1.0)) / (nd - 2.0);
        jsum += vi;
        jsum2 += vi * vi;
    }
    const double jmean = jsum / nd;
    const double var_se = std::sqrt(std::max(0.0, (nd - 1.0) / nd * (jsum2 - nd * jmean * jmean)));
    return {mean, var, std::sqrt(var / nd), var_se};
}

CovEst covariance(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3) throw std::invalid_argument("covariance: bad sample");
    const double nd = static_cast<double>(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= nd;
    my /= nd;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxy += (x[i] - mx) * (y[i] - my);
    const double cov = sxy / (nd - 1.0);

    double jsum = 0.0, jsum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cx = x[i] - mx;
        const double cy = y[i] - my;
        const double ci = (sxy - cx * cy - cx * cy / (nd - 1.0)) / (nd - 2.0);
        jsum += ci;
        jsum2 += ci * ci;
    }
    const double jmean = jsum / nd;
    const double se = std::sqrt(std::max(0.0, (nd - 1.0) / nd * (jsum2 - nd * jmean * jmean)));
    return {cov, se};
}

}  // namespace octoport
