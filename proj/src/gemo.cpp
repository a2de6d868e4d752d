#include "gemo/gemo.hpp"
#include "gemo/error.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace gemo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Denominator 1 - (1-alpha) * Fbar^gamma, evaluated from gL = gamma * log Fbar
// as alpha - (1-alpha) * expm1(gL).  This is a convex combination of alpha
// and 1, hence strictly positive for every alpha > 0.
double denom(double alpha, double gl) {
    return alpha - (1.0 - alpha) * std::expm1(gl);
}

} // namespace

void validate(const GemoParams& p) {
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
        throw domain_error("gemo: alpha must be positive and finite");
    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
        throw domain_error("gemo: beta must be positive and finite");
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
        throw domain_error("gemo: gamma must be positive and finite");
    validate(p.baseline);
}

int total_param_count(const GemoParams& p) {
    return 3 + param_count(p.baseline.kind);
}

double gemo_log_sf(const GemoParams& p, double x) {
    double L = baseline_log_sf(p.baseline, x);
    double gl = p.gamma * L;
    return p.beta * (std::log(p.alpha) + gl - std::log(denom(p.alpha, gl)));
}

double gemo_sf(const GemoParams& p, double x) {
    return std::exp(gemo_log_sf(p, x));
}

double gemo_cdf(const GemoParams& p, double x) {
    return -std::expm1(gemo_log_sf(p, x));
}

double gemo_logpdf(const GemoParams& p, double x) {
    double lf = baseline_log_pdf(p.baseline, x);
    if (lf == kNegInf)
        return kNegInf;
    double L = baseline_log_sf(p.baseline, x);
    double gl = p.gamma * L;
    return std::log(p.beta) + std::log(p.gamma) + p.beta * std::log(p.alpha) + lf +
           (p.beta * p.gamma - 1.0) * L - (p.beta + 1.0) * std::log(denom(p.alpha, gl));
}

double gemo_pdf(const GemoParams& p, double x) {
    double lp = gemo_logpdf(p, x);
    return lp == kNegInf ? 0.0 : std::exp(lp);
}

double gemo_hrf(const GemoParams& p, double x) {
    if (!(x > 0.0))
        throw domain_error("gemo_hrf: x must lie in the open support");
    return std::exp(gemo_logpdf(p, x) - gemo_log_sf(p, x));
}

double gemo_inv_log_sf(const GemoParams& p, double target) {
    if (!(target < 0.0))
        throw domain_error("gemo_inv_log_sf: target log survival must be negative");
    // With v = Gbar^(1/beta):  Fbar^gamma = v / (alpha + (1-alpha) v);
    // the denominator log uses log1p on (1-alpha)(v-1) for accuracy near 0.
    double lv = target / p.beta;
    double la = std::log1p((1.0 - p.alpha) * std::expm1(lv));
    return baseline_inv_log_sf(p.baseline, (lv - la) / p.gamma);
}

double gemo_quantile(const GemoParams& p, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw domain_error("gemo_quantile: u must lie in (0,1)");
    return gemo_inv_log_sf(p, std::log1p(-u));
}

std::vector<double> gemo_sample(const GemoParams& p, int n, std::uint64_t seed) {
    if (n < 1)
        throw domain_error("gemo_sample: n must be at least 1");
    std::mt19937_64 gen(seed);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // 53 random bits mapped to bin centers: u lies strictly inside (0,1).
        double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
        out.push_back(gemo_quantile(p, u));
    }
    return out;
}

SeriesWeights series_weights(const GemoParams& p, double tol) {
    double q = 1.0 - p.alpha;
    if (!(std::fabs(q) < 1.0))
        throw numerical_error("series_weights: expansion requires |1-alpha| < 1");
    if (!(tol > 0.0))
        throw domain_error("series_weights: tol must be positive");

    SeriesWeights out;
    out.weights.push_back(1.0);
    double wstar = 1.0;   // binomial coefficient Gamma(beta+j+1)/(Gamma(beta+1) j!)
    double qj = 1.0;      // (1-alpha)^j
    const double aq = std::fabs(q);
    const int max_terms = 100000;
    for (int j = 1; j <= max_terms; ++j) {
        wstar *= (p.beta + j) / j;
        qj *= q;
        double wj = wstar * qj;
        out.weights.push_back(wj);
        // Tail ratio |w_{j+1}/w_j| = |1-alpha| (beta+j+1)/(j+1) shrinks
        // toward |1-alpha|; once below 1 a geometric bound applies.
        double r = aq * (p.beta + j + 1.0) / (j + 1.0);
        if (r < 1.0) {
            double bound = std::fabs(wj) * r / (1.0 - r);
            if (bound < tol) {
                out.truncation_index = j;
                out.tail_bound = bound;
                return out;
            }
        }
    }
    throw numerical_error("series_weights: failed to reach tolerance");
}

double series_pdf(const GemoParams& p, const SeriesWeights& w, double x) {
    double lf = baseline_log_pdf(p.baseline, x);
    if (lf == kNegInf)
        return 0.0;
    double L = baseline_log_sf(p.baseline, x);
    double t = std::exp(p.gamma * L);
    double sum = 0.0;
    // Horner in t keeps the alternating case (1 < alpha < 2) stable.
    for (size_t j = w.weights.size(); j-- > 0;)
        sum = w.weights[j] + t * sum;
    double prefix = std::log(p.beta) + std::log(p.gamma) + p.beta * std::log(p.alpha) +
                    lf + (p.beta * p.gamma - 1.0) * L;
    return std::exp(prefix) * sum;
}

} // namespace gemo
