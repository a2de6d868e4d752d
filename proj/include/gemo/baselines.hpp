#pragma once

#include <string>
#include <vector>

namespace gemo {

enum class BaselineKind { Exponential, Weibull, Gamma, Lomax, LogNormal };

// Baseline parameter layout follows the family definitions:
//   Exponential: {lambda}            rate
//   Weibull:     {lambda, theta}     shape, scale
//   Gamma:       {lambda, theta}     shape, rate
//   Lomax:       {lambda, theta}     scale, shape
//   LogNormal:   {mu, sigma}
struct BaselineModel {
    BaselineKind kind;
    std::vector<double> params;

    static BaselineModel exponential(double lambda);
    static BaselineModel weibull(double lambda, double theta);
    static BaselineModel gamma(double lambda, double theta);
    static BaselineModel lomax(double lambda, double theta);
    static BaselineModel lognormal(double mu, double sigma);
};

int param_count(BaselineKind kind);
const std::vector<std::string>& param_names(BaselineKind kind);
std::string baseline_name(BaselineKind kind);
BaselineKind baseline_kind_from_name(const std::string& name);

// Throws domain_error when the parameter vector is the wrong length or
// violates positivity (LogNormal mu may be any real).
void validate(const BaselineModel& m);

// All supports are (0, inf): pdf and cdf return 0 for x <= 0, sf returns 1,
// log_pdf returns -inf, so integrating over the whole line is safe.
double baseline_pdf(const BaselineModel& m, double x);
double baseline_log_pdf(const BaselineModel& m, double x);
double baseline_cdf(const BaselineModel& m, double x);
double baseline_sf(const BaselineModel& m, double x);
double baseline_log_sf(const BaselineModel& m, double x);
double baseline_quantile(const BaselineModel& m, double u);

// Inverse of log_sf: the x with log sf(x) = target.  The GEMO quantile
// works through this so that survival targets near 0 or 1 lose no accuracy.
double baseline_inv_log_sf(const BaselineModel& m, double target);

} // namespace gemo
