#pragma once

namespace gemo {

// Regularized lower incomplete gamma P(s, z) = gamma(s, z) / Gamma(s).
// Series expansion for z < s + 1, Lentz continued fraction otherwise.
// Absolute accuracy 1e-13 or better over the tested range.
double reg_lower_gamma(double s, double z);

// Regularized upper incomplete gamma Q(s, z) = 1 - P(s, z), computed
// directly from whichever representation is accurate in the tail.
double reg_upper_gamma(double s, double z);

// log Q(s, z), finite even where Q itself underflows.
double log_reg_upper_gamma(double s, double z);

// Inverse of P(s, .): returns z with reg_lower_gamma(s, z) = p.
double inv_reg_lower_gamma(double s, double p);

// Error function and its inverse.  error_function delegates to the C
// library erf (correctly rounded on this platform); the inverse uses a
// rational initializer polished by Newton steps on erf.
double error_function(double z);
double inverse_error_function(double y);

// Standard normal cdf, its inverse, and the log of the upper tail.
// log_norm_sf stays accurate far into the tail where 1 - Phi underflows.
double norm_cdf(double z);
double norm_quantile(double p);
double log_norm_sf(double z);

// Inverse of the standard normal survival function given log(sf).
// Needed by the LogNormal baseline inverse-sf in log space.
double norm_isf_from_log(double log_sf);

} // namespace gemo
