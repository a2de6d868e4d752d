#pragma once

#include "gemo/gemo.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gemo {

// observations with a cached ascending view
struct Dataset {
    std::string label;
    std::vector<double> values;
    std::vector<double> sorted_values;

    std::size_t n() const { return values.size(); }
};

// validates positivity and n >= 2, sorts the cached view
Dataset make_dataset(std::vector<double> values, std::string label = "");

// full coordinate vector (alpha, beta, gamma, baseline params), natural scale
std::vector<double> param_vector(const GemoParams& p);
GemoParams params_from_vector(BaselineKind kind, const std::vector<double>& v);
std::vector<std::string> coordinate_names(BaselineKind kind);

// sum of gemo_logpdf over the data; -infinity is reported, not thrown
double log_likelihood(const GemoParams& p, const Dataset& data);

// analytic (d/dalpha, d/dbeta, d/dgamma) of the log-likelihood
std::array<double, 3> score_gemo(const GemoParams& p, const Dataset& data);

// closed-form second derivatives of the log-likelihood, kept as cross-checks
// for the numeric hessian (observed information negates them)
double d2_loglik_dalpha2(const GemoParams& p, const Dataset& data);
double d2_loglik_dbeta2(const GemoParams& p, const Dataset& data);
double d2_loglik_dalpha_dbeta(const GemoParams& p, const Dataset& data);

using Matrix = std::vector<std::vector<double>>;

// negated numeric hessian of the log-likelihood over all p+3 natural
// coordinates, centered differences with step cbrt(eps) * max(1, |theta_r|)
Matrix observed_information(const GemoParams& p, const Dataset& data);

struct FitOptions {
    int starts = 20;
    std::uint64_t seed = 1;
    int max_iterations = 500;
    double gradient_tolerance = 1e-8;   // scaled sup-norm stopping rule
    std::optional<GemoParams> init;     // fixed values and anchor override
    std::map<std::string, double> fixed;  // per-coordinate overrides by name
};

struct FitResult {
    GemoParams params{1.0, 1.0, 1.0, BaselineModel::exponential(1.0)};
    std::vector<bool> free_mask;
    std::vector<std::string> names;
    double loglik = 0.0;
    Matrix covariance;                  // full size, zero rows/cols when fixed
    std::vector<double> std_errors;     // zero for fixed coordinates
    bool converged = false;
    int n_starts = 0;
    double gradient_norm = 0.0;         // scaled sup-norm at the optimum
    bool ridge_warning = false;         // near-singular information matrix
};

// multi-start quasi-newton maximum likelihood over the coordinates marked
// free (empty mask means all free); positive coordinates are optimized in
// log space, the lognormal location stays untransformed
FitResult fit(const Dataset& data, BaselineKind kind,
              std::vector<bool> free_mask = {}, const FitOptions& options = {});

struct CiRow {
    std::string name;
    double estimate;
    double std_error;
    double lower;
    double upper;
};

// wald intervals for the free coordinates; natural scale by default, the
// log-scale variant maps the interval through exp via the delta method
std::vector<CiRow> asymptotic_ci(const FitResult& fit, double level,
                                 bool log_scale = false);

struct LrtResult {
    double statistic;
    int df;
    double p_value;
};

// restricted must be nested in full: same baseline, free set a subset
LrtResult likelihood_ratio_test(const FitResult& full, const FitResult& restricted);

// upper tail of the chi-squared distribution with df degrees of freedom
double chi_squared_sf(double x, int df);

} // namespace gemo
