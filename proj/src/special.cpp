#include "gemo/special.hpp"
#include "gemo/error.hpp"

#include <cmath>
#include <limits>

namespace gemo {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;
const double kSqrt2 = std::sqrt(2.0);
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * 3.14159265358979323846);

// Series representation of P(s, z), valid and fast for z < s + 1.
double gamma_p_series(double s, double z) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps)
            break;
    }
    return sum * std::exp(-z + s * std::log(z) - std::lgamma(s));
}

// Modified Lentz continued fraction for Q(s, z), valid for z >= s + 1.
// Returns the fraction value h with Q = h * exp(-z + s log z - lgamma(s)).
double gamma_q_cf_factor(double s, double z) {
    const double tiny = 1e-300;
    double b = z + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps)
            break;
    }
    return h;
}

double gamma_q_cf(double s, double z) {
    return gamma_q_cf_factor(s, z) * std::exp(-z + s * std::log(z) - std::lgamma(s));
}

} // namespace

double reg_lower_gamma(double s, double z) {
    if (!(s > 0.0))
        throw domain_error("reg_lower_gamma: shape must be positive");
    if (z < 0.0)
        throw domain_error("reg_lower_gamma: argument must be nonnegative");
    if (z == 0.0)
        return 0.0;
    if (z < s + 1.0)
        return gamma_p_series(s, z);
    return 1.0 - gamma_q_cf(s, z);
}

double reg_upper_gamma(double s, double z) {
    if (!(s > 0.0))
        throw domain_error("reg_upper_gamma: shape must be positive");
    if (z < 0.0)
        throw domain_error("reg_upper_gamma: argument must be nonnegative");
    if (z == 0.0)
        return 1.0;
    if (z < s + 1.0)
        return 1.0 - gamma_p_series(s, z);
    return gamma_q_cf(s, z);
}

double log_reg_upper_gamma(double s, double z) {
    if (!(s > 0.0))
        throw domain_error("log_reg_upper_gamma: shape must be positive");
    if (z < 0.0)
        throw domain_error("log_reg_upper_gamma: argument must be nonnegative");
    if (z == 0.0)
        return 0.0;
    if (z < s + 1.0)
        return std::log1p(-gamma_p_series(s, z));
    return std::log(gamma_q_cf_factor(s, z)) - z + s * std::log(z) - std::lgamma(s);
}

double inv_reg_lower_gamma(double s, double p) {
    if (!(s > 0.0))
        throw domain_error("inv_reg_lower_gamma: shape must be positive");
    if (!(p > 0.0 && p < 1.0))
        throw domain_error("inv_reg_lower_gamma: probability must lie in (0,1)");

    // Wilson-Hilferty starting point, clamped away from zero.
    double g = norm_quantile(p);
    double t = 1.0 - 1.0 / (9.0 * s) + g / (3.0 * std::sqrt(s));
    double z = s * t * t * t;
    if (!(z > 0.0) || !std::isfinite(z))
        z = s * std::exp((std::log(p) + std::lgamma(s + 1.0)) / s);
    if (!(z > 0.0) || !std::isfinite(z))
        z = 1e-8;

    // Newton on P(s, z) - p with a bisection bracket as safety net.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    const double lgs = std::lgamma(s);
    for (int i = 0; i < 200; ++i) {
        double f = reg_lower_gamma(s, z) - p;
        if (std::fabs(f) <= 1e-15)
            break;
        if (f > 0.0) hi = z; else lo = z;
        double logpdf = -z + (s - 1.0) * std::log(z) - lgs;
        double step = f * std::exp(-logpdf);
        double znew = z - step;
        if (!(znew > lo && (znew < hi))) {
            znew = std::isfinite(hi) ? 0.5 * (lo + hi) : (lo > 0.0 ? 2.0 * lo + 1.0 : 1.0);
        }
        // The root can be many orders of magnitude below 1; only a step that
        // is tiny relative to z itself signals convergence.
        if (std::fabs(znew - z) <= 1e-15 * z) {
            z = znew;
            break;
        }
        z = znew;
    }
    return z;
}

double error_function(double z) {
    return std::erf(z);
}

double inverse_error_function(double y) {
    if (!(y > -1.0 && y < 1.0))
        throw domain_error("inverse_error_function: argument must lie in (-1,1)");
    if (y == 0.0)
        return 0.0;
    // erfinv(y) = Phi^{-1}((1+y)/2) / sqrt(2), then Newton-polish on erf.
    double x = norm_quantile(0.5 * (1.0 + y)) / kSqrt2;
    for (int i = 0; i < 3; ++i) {
        double err = std::erf(x) - y;
        // d erf/dx = 2/sqrt(pi) exp(-x^2)
        x -= err * 0.8862269254527580137 * std::exp(x * x);
    }
    return x;
}

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / kSqrt2);
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw domain_error("norm_quantile: probability must lie in (0,1)");

    // Acklam's rational approximation, then one Newton correction using the
    // erfc-based cdf which stays accurate in both tails.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step: e = Phi(x) - p, u = e / phi(x).
    double e = norm_cdf(x) - p;
    double u = e * std::exp(0.5 * x * x + kLogSqrt2Pi);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double log_norm_sf(double z) {
    if (z < 8.0) {
        // erfc does not underflow here; direct evaluation is exact enough.
        return std::log(0.5 * std::erfc(z / kSqrt2));
    }
    // Mills-ratio continued fraction: sf(z) = phi(z) / R,
    // R = z + 1/(z + 2/(z + 3/(z + ...))), evaluated by modified Lentz.
    const double tiny = 1e-300;
    double b0 = z;
    double c = 1.0 / tiny;
    double d = 1.0 / b0;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = static_cast<double>(i);
        d = b0 + an * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = b0 + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps)
            break;
    }
    // h = 1/R; log sf = log phi(z) + log h
    return -0.5 * z * z - kLogSqrt2Pi + std::log(h);
}

double norm_isf_from_log(double log_sf) {
    if (!(log_sf < 0.0))
        throw domain_error("norm_isf_from_log: log survival must be negative");

    double z;
    if (log_sf > -700.0) {
        double p = std::exp(log_sf);
        z = (p < 1.0) ? -norm_quantile(p) : 0.0;
    } else {
        // Asymptotic inversion of log sf ~ -z^2/2 - log(z sqrt(2 pi)).
        z = std::sqrt(-2.0 * log_sf);
        for (int i = 0; i < 4; ++i)
            z = std::sqrt(2.0 * (-log_sf - std::log(z) - kLogSqrt2Pi));
    }
    // Newton in log space: d(log sf)/dz = -exp(log phi - log sf).
    for (int i = 0; i < 50; ++i) {
        double lsf = log_norm_sf(z);
        double f = lsf - log_sf;
        if (std::fabs(f) < 1e-14)
            break;
        double lphi = -0.5 * z * z - kLogSqrt2Pi;
        z += f * std::exp(lsf - lphi);
    }
    return z;
}

} // namespace gemo
