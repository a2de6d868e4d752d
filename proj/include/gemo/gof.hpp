#pragma once

#include "gemo/gemo.hpp"
#include "gemo/inference.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gemo {

struct GofReport {
    std::string model_name;
    int k = 0;              // free parameters
    double loglik = 0.0;
    double aic = 0.0;
    double ks = 0.0;
    double ad = 0.0;
};

// akaike information criterion 2k - 2 loglik
double aic(double loglik, int k);

// two-sided kolmogorov-smirnov distance of the fitted cdf from the
// empirical step function
double ks_statistic(const GemoParams& p, const Dataset& data);

// anderson-darling statistic; model probabilities are clamped to
// [1e-15, 1 - 1e-15] before the logs and clamp events are counted
double ad_statistic(const GemoParams& p, const Dataset& data,
                    int* clamp_events = nullptr);

// scaled total time on test curve, (i/n, T_i) pairs starting at (0, 0)
std::vector<std::pair<double, double>> ttt_transform(const Dataset& data);

// internal-consistency audit of the bundled comparison-table rows: each
// tabulated aic is recomputed from its log-likelihood and parameter count
struct AicAuditRow {
    std::string label;
    double loglik = 0.0;
    int k = 0;
    double tabulated_aic = 0.0;
    double computed_aic = 0.0;
    bool consistent = false;    // within 0.01 of the tabulated value
};

std::vector<AicAuditRow> aic_audit();

} // namespace gemo
