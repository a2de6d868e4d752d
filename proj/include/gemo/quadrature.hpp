#pragma once

#include <functional>

namespace gemo {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

struct QuadOptions {
    double rel_tol;
    double abs_tol;
    int max_intervals;
    QuadOptions();
};

// Relative tolerance default: 1e-10, overridable via GEMO_QUAD_TOL.
double quad_default_rel_tol();

// Globally adaptive Gauss-Kronrod 7-15 on [a, b].  The rule never evaluates
// the endpoints, so integrable endpoint singularities are fine.  Worst
// interval (largest error estimate) is split first until the summed error
// meets max(abs_tol, rel_tol * |integral|) or the interval budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = QuadOptions());

// Same, but throws numerical_error with diagnostics on non-convergence.
// 'what' names the integral for the error message.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const char* what, const QuadOptions& opts = QuadOptions());

} // namespace gemo
