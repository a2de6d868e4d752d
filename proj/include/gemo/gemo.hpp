#pragma once

#include "gemo/baselines.hpp"

#include <cstdint>
#include <vector>

namespace gemo {

// Family parameters on top of a baseline: survival
//   Gbar(x) = [ alpha * Fbar(x)^gamma / (1 - (1-alpha) * Fbar(x)^gamma) ]^beta
struct GemoParams {
    double alpha;
    double beta;
    double gamma;
    BaselineModel baseline;
};

void validate(const GemoParams& p);
int total_param_count(const GemoParams& p);

double gemo_log_sf(const GemoParams& p, double x);
double gemo_sf(const GemoParams& p, double x);
double gemo_cdf(const GemoParams& p, double x);
double gemo_logpdf(const GemoParams& p, double x);
double gemo_pdf(const GemoParams& p, double x);

// Hazard rate g/Gbar.  When the survival underflows to zero the ratio is
// reported as +inf rather than throwing.
double gemo_hrf(const GemoParams& p, double x);

double gemo_quantile(const GemoParams& p, double u);

// x with log Gbar(x) = target (target < 0).  Quantile generalized to
// log-survival targets; exact deep in either tail.
double gemo_inv_log_sf(const GemoParams& p, double target);

// Inverse-transform draws from a seeded 64-bit Mersenne twister.
// Reproducible for a fixed seed within one build.
std::vector<double> gemo_sample(const GemoParams& p, int n, std::uint64_t seed);

// Expansion of the pdf as sum_j w_j * beta*gamma*alpha^beta * f *
// Fbar^{gamma(beta+j)-1}, convergent for |1-alpha| < 1.  weights holds the
// net w_j including the (1-alpha)^j factor; tail_bound bounds the summed
// absolute weights beyond truncation_index.
struct SeriesWeights {
    std::vector<double> weights;
    int truncation_index = 0;
    double tail_bound = 0.0;
};

SeriesWeights series_weights(const GemoParams& p, double tol);
double series_pdf(const GemoParams& p, const SeriesWeights& w, double x);

} // namespace gemo
