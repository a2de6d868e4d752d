#pragma once

#include "gemo/gemo.hpp"

#include <vector>

namespace gemo {

// Improper integrals are truncated at Q(1 - 1e-12).  When the estimated
// neglected tail is not negligible against the truncated value (divergent or
// barely-integrable moments), a numerical_error is thrown instead of
// silently returning the truncated number.
double raw_moment(const GemoParams& p, int r);

// E[e^{tX}].  For t > 0 the domain is extended beyond the usual truncation
// point until the integrand has decayed; failure to decay is reported as
// divergence.
double mgf(const GemoParams& p, double t);

// Probability weighted moment E[X^l G(X)^j (1-G(X))^k].
double pwm(const GemoParams& p, int l, int j, int k);

// E[X - t | X > t] and E[t - X | X <= t], from the defining integrals of the
// survival and distribution functions.
double mean_residual_life(const GemoParams& p, double t);
double mean_past_lifetime(const GemoParams& p, double t);

// E[X^n | X >= t].
double conditional_moment(const GemoParams& p, int n, double t);

// Varma entropy (1/(b-a)) log int g^{a+b-1}, constraints b-1 < a < b,
// b >= 1, a+b != 2; Shannon entropy -int g log g is the (a,b) -> (1,1) limit.
double varma_entropy(const GemoParams& p, double a, double b);
double shannon_entropy(const GemoParams& p);

// Density of the r-th of n order statistics at x.
double order_statistic_pdf(const GemoParams& p, int r, int n, double x);

struct ReliabilityRow {
    double u;
    double t;
    double mrl;
    double mpl;
};

struct ReliabilityTable {
    std::vector<ReliabilityRow> rows;
    GemoParams params;
};

// One row per requested percentile: t = Q(u), MRL(t), MPL(t).
ReliabilityTable reliability_table(const GemoParams& p, const std::vector<double>& percentiles);

} // namespace gemo
