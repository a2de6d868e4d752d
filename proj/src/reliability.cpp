#include "gemo/reliability.hpp"
#include "gemo/error.hpp"
#include "gemo/quadrature.hpp"

#include <cmath>
#include <limits>

namespace gemo {

namespace {

constexpr double kTailSf = 1e-12;
const double kLogTailSf = std::log(kTailSf);

double upper_limit(const GemoParams& p) {
    return gemo_inv_log_sf(p, kLogTailSf);
}

double xpow(double x, int r) {
    double v = 1.0;
    for (int i = 0; i < r; ++i)
        v *= x;
    return v;
}

} // namespace

double raw_moment(const GemoParams& p, int r) {
    validate(p);
    if (r < 1)
        throw domain_error("raw_moment: order must be at least 1");
    double hi = upper_limit(p);
    double value = integrate_or_throw(
        [&](double x) { return xpow(x, r) * gemo_pdf(p, x); }, 0.0, hi, "raw moment");
    // Neglected tail is on the order of sf(hi) * hi^r; refuse to report a
    // truncated value when that is not small against the integral itself.
    double tail = kTailSf * xpow(hi, r);
    if (!(tail <= 1e-6 * std::fabs(value)))
        throw numerical_error("raw_moment: truncated tail is not negligible; "
                              "the moment may not exist");
    return value;
}

double mgf(const GemoParams& p, double t) {
    validate(p);
    double hi = upper_limit(p);
    if (t > 0.0) {
        // Push the limit out until the integrand itself has decayed; if it
        // refuses to decay the integral diverges.
        const double cap = hi * 1e6;
        while (t * hi + gemo_logpdf(p, hi) > -60.0) {
            hi *= 1.5;
            if (hi > cap)
                throw numerical_error("mgf: integrand does not decay; "
                                      "divergent for this t");
        }
    }
    return integrate_or_throw(
        [&](double x) { return std::exp(t * x) * gemo_pdf(p, x); }, 0.0, hi,
        "moment generating function");
}

double pwm(const GemoParams& p, int l, int j, int k) {
    validate(p);
    if (l < 0 || j < 0 || k < 0)
        throw domain_error("pwm: orders must be nonnegative");
    double hi = upper_limit(p);
    double value = integrate_or_throw(
        [&](double x) {
            double g = gemo_pdf(p, x);
            if (g == 0.0)
                return 0.0;
            double c = gemo_cdf(p, x);
            return xpow(x, l) * std::pow(c, j) * std::pow(1.0 - c, k) * g;
        },
        0.0, hi, "probability weighted moment");
    double tail = kTailSf * xpow(hi, l);
    if (!(tail <= 1e-6 * std::max(std::fabs(value), 1e-300)))
        throw numerical_error("pwm: truncated tail is not negligible");
    return value;
}

double mean_residual_life(const GemoParams& p, double t) {
    validate(p);
    if (t < 0.0)
        throw domain_error("mean_residual_life: t must be nonnegative");
    double lst = t > 0.0 ? gemo_log_sf(p, t) : 0.0;
    if (!std::isfinite(lst))
        throw numerical_error("mean_residual_life: survival underflows at t");
    // Ratio form exp(log sf(x) - log sf(t)) tolerates deep-tail t; the upper
    // limit is where the conditional survival has dropped to 1e-12.
    double hi = gemo_inv_log_sf(p, lst + kLogTailSf);
    return integrate_or_throw(
        [&](double x) { return std::exp(gemo_log_sf(p, x) - lst); }, t, hi,
        "mean residual life");
}

double mean_past_lifetime(const GemoParams& p, double t) {
    validate(p);
    if (!(t > 0.0))
        throw domain_error("mean_past_lifetime: t must be positive");
    double gt = gemo_cdf(p, t);
    if (!(gt > 0.0))
        throw domain_error("mean_past_lifetime: G(t) underflows to zero");
    double integral = integrate_or_throw(
        [&](double x) { return gemo_cdf(p, x); }, 0.0, t, "mean past lifetime");
    return integral / gt;
}

double conditional_moment(const GemoParams& p, int n, double t) {
    validate(p);
    if (n < 0)
        throw domain_error("conditional_moment: order must be nonnegative");
    if (t < 0.0)
        throw domain_error("conditional_moment: t must be nonnegative");
    double lst = t > 0.0 ? gemo_log_sf(p, t) : 0.0;
    if (!std::isfinite(lst))
        throw numerical_error("conditional_moment: survival underflows at t");
    double hi = gemo_inv_log_sf(p, lst + kLogTailSf);
    double value = integrate_or_throw(
        [&](double x) {
            double lp = gemo_logpdf(p, x);
            return lp - lst < -700.0 ? 0.0 : xpow(x, n) * std::exp(lp - lst);
        },
        t, hi, "conditional moment");
    double tail = kTailSf * xpow(hi, n);
    if (!(tail <= 1e-6 * std::max(std::fabs(value), 1.0)))
        throw numerical_error("conditional_moment: truncated tail is not negligible");
    return value;
}

double varma_entropy(const GemoParams& p, double a, double b) {
    validate(p);
    if (!(b >= 1.0))
        throw domain_error("varma_entropy: b must be at least 1");
    if (!(a > b - 1.0 && a < b))
        throw domain_error("varma_entropy: need b-1 < a < b");
    if (a + b == 2.0)
        throw domain_error("varma_entropy: a+b=2 is the Shannon limit; "
                           "use shannon_entropy");
    double e = a + b - 1.0;
    double hi = upper_limit(p);
    double integral = integrate_or_throw(
        [&](double x) {
            double lp = gemo_logpdf(p, x);
            double v = e * lp;
            return v < -700.0 ? 0.0 : std::exp(v);
        },
        0.0, hi, "Varma entropy");
    return std::log(integral) / (b - a);
}

double shannon_entropy(const GemoParams& p) {
    validate(p);
    double hi = upper_limit(p);
    return integrate_or_throw(
        [&](double x) {
            double lp = gemo_logpdf(p, x);
            // g log g -> 0 where the density vanishes
            return lp < -700.0 ? 0.0 : -std::exp(lp) * lp;
        },
        0.0, hi, "Shannon entropy");
}

double order_statistic_pdf(const GemoParams& p, int r, int n, double x) {
    validate(p);
    if (r < 1 || n < 1 || r > n)
        throw domain_error("order_statistic_pdf: need 1 <= r <= n");
    double lp = gemo_logpdf(p, x);
    if (!std::isfinite(lp))
        return 0.0;
    double ls = gemo_log_sf(p, x);
    double c = -std::expm1(ls);
    // 1/B(r, n-r+1) via log gammas
    double lb = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(r)) -
                std::lgamma(n - r + 1.0);
    double logv = lb + lp + (n - r) * ls;
    double v = std::exp(logv);
    return r > 1 ? v * std::pow(c, r - 1) : v;
}

ReliabilityTable reliability_table(const GemoParams& p, const std::vector<double>& percentiles) {
    validate(p);
    if (percentiles.empty())
        throw domain_error("reliability_table: no percentiles requested");
    ReliabilityTable out{{}, p};
    for (double u : percentiles) {
        if (!(u > 0.0 && u < 1.0))
            throw domain_error("reliability_table: percentiles must lie in (0,1)");
        double t = gemo_quantile(p, u);
        out.rows.push_back({u, t, mean_residual_life(p, t), mean_past_lifetime(p, t)});
    }
    return out;
}

} // namespace gemo
