#include "gemo/baselines.hpp"
#include "gemo/error.hpp"
#include "gemo/special.hpp"

#include <cmath>
#include <limits>

namespace gemo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * 3.14159265358979323846);

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error(std::string("baseline: ") + what + " must be positive and finite");
}

} // namespace

BaselineModel BaselineModel::exponential(double lambda) {
    return {BaselineKind::Exponential, {lambda}};
}
BaselineModel BaselineModel::weibull(double lambda, double theta) {
    return {BaselineKind::Weibull, {lambda, theta}};
}
BaselineModel BaselineModel::gamma(double lambda, double theta) {
    return {BaselineKind::Gamma, {lambda, theta}};
}
BaselineModel BaselineModel::lomax(double lambda, double theta) {
    return {BaselineKind::Lomax, {lambda, theta}};
}
BaselineModel BaselineModel::lognormal(double mu, double sigma) {
    return {BaselineKind::LogNormal, {mu, sigma}};
}

int param_count(BaselineKind kind) {
    return kind == BaselineKind::Exponential ? 1 : 2;
}

const std::vector<std::string>& param_names(BaselineKind kind) {
    static const std::vector<std::string> exp_names{"lambda"};
    static const std::vector<std::string> two_names{"lambda", "theta"};
    static const std::vector<std::string> ln_names{"mu", "sigma"};
    switch (kind) {
    case BaselineKind::Exponential: return exp_names;
    case BaselineKind::LogNormal: return ln_names;
    default: return two_names;
    }
}

std::string baseline_name(BaselineKind kind) {
    switch (kind) {
    case BaselineKind::Exponential: return "exponential";
    case BaselineKind::Weibull: return "weibull";
    case BaselineKind::Gamma: return "gamma";
    case BaselineKind::Lomax: return "lomax";
    case BaselineKind::LogNormal: return "lognormal";
    }
    throw domain_error("baseline_name: unknown kind");
}

BaselineKind baseline_kind_from_name(const std::string& name) {
    if (name == "exponential") return BaselineKind::Exponential;
    if (name == "weibull") return BaselineKind::Weibull;
    if (name == "gamma") return BaselineKind::Gamma;
    if (name == "lomax") return BaselineKind::Lomax;
    if (name == "lognormal") return BaselineKind::LogNormal;
    throw domain_error("unknown baseline name: " + name);
}

void validate(const BaselineModel& m) {
    if (static_cast<int>(m.params.size()) != param_count(m.kind))
        throw domain_error("baseline: wrong parameter count for " + baseline_name(m.kind));
    if (m.kind == BaselineKind::LogNormal) {
        if (!std::isfinite(m.params[0]))
            throw domain_error("baseline: mu must be finite");
        require_positive(m.params[1], "sigma");
        return;
    }
    for (double v : m.params)
        require_positive(v, "parameter");
}

double baseline_log_pdf(const BaselineModel& m, double x) {
    if (!(x > 0.0))
        return kNegInf;
    switch (m.kind) {
    case BaselineKind::Exponential: {
        double lam = m.params[0];
        return std::log(lam) - lam * x;
    }
    case BaselineKind::Weibull: {
        double lam = m.params[0], th = m.params[1];
        double lz = std::log(x / th);
        return std::log(lam / th) + (lam - 1.0) * lz - std::exp(lam * lz);
    }
    case BaselineKind::Gamma: {
        double lam = m.params[0], th = m.params[1];
        return lam * std::log(th) + (lam - 1.0) * std::log(x) - x * th - std::lgamma(lam);
    }
    case BaselineKind::Lomax: {
        double lam = m.params[0], th = m.params[1];
        return std::log(th / lam) - (th + 1.0) * std::log1p(x / lam);
    }
    case BaselineKind::LogNormal: {
        double mu = m.params[0], sig = m.params[1];
        double z = (std::log(x) - mu) / sig;
        return -std::log(x) - std::log(sig) - kLogSqrt2Pi - 0.5 * z * z;
    }
    }
    throw domain_error("baseline_log_pdf: unknown kind");
}

double baseline_pdf(const BaselineModel& m, double x) {
    if (!(x > 0.0))
        return 0.0;
    return std::exp(baseline_log_pdf(m, x));
}

double baseline_log_sf(const BaselineModel& m, double x) {
    if (!(x > 0.0))
        return 0.0;
    switch (m.kind) {
    case BaselineKind::Exponential:
        return -m.params[0] * x;
    case BaselineKind::Weibull: {
        double lam = m.params[0], th = m.params[1];
        return -std::exp(lam * std::log(x / th));
    }
    case BaselineKind::Gamma:
        return log_reg_upper_gamma(m.params[0], x * m.params[1]);
    case BaselineKind::Lomax:
        return -m.params[1] * std::log1p(x / m.params[0]);
    case BaselineKind::LogNormal: {
        double z = (std::log(x) - m.params[0]) / m.params[1];
        return log_norm_sf(z);
    }
    }
    throw domain_error("baseline_log_sf: unknown kind");
}

double baseline_sf(const BaselineModel& m, double x) {
    return std::exp(baseline_log_sf(m, x));
}

double baseline_cdf(const BaselineModel& m, double x) {
    if (!(x > 0.0))
        return 0.0;
    // -expm1(log sf) keeps small cdf values exact; for the Gamma the lower
    // incomplete form is more direct and equally stable.
    if (m.kind == BaselineKind::Gamma)
        return reg_lower_gamma(m.params[0], x * m.params[1]);
    if (m.kind == BaselineKind::LogNormal)
        return norm_cdf((std::log(x) - m.params[0]) / m.params[1]);
    return -std::expm1(baseline_log_sf(m, x));
}

double baseline_inv_log_sf(const BaselineModel& m, double target) {
    if (!(target <= 0.0))
        throw domain_error("baseline_inv_log_sf: target log survival must be <= 0");
    if (target == 0.0)
        return 0.0;
    switch (m.kind) {
    case BaselineKind::Exponential:
        return -target / m.params[0];
    case BaselineKind::Weibull: {
        double lam = m.params[0], th = m.params[1];
        return th * std::exp(std::log(-target) / lam);
    }
    case BaselineKind::Lomax: {
        double lam = m.params[0], th = m.params[1];
        return lam * std::expm1(-target / th);
    }
    case BaselineKind::LogNormal: {
        double mu = m.params[0], sig = m.params[1];
        return std::exp(mu + sig * norm_isf_from_log(target));
    }
    case BaselineKind::Gamma: {
        double lam = m.params[0], th = m.params[1];
        double z;
        if (target > -36.0) {
            // 1 - sf is still strictly below 1 here; invert the lower
            // incomplete gamma at p computed without cancellation.
            z = inv_reg_lower_gamma(lam, -std::expm1(target));
        } else {
            // Far tail: Newton on log Q(lam, z) = target.
            z = -target;
            for (int i = 0; i < 4; ++i)
                z = -target + (lam - 1.0) * std::log(z) - std::lgamma(lam);
            if (!(z > 0.0)) z = -target;
        }
        const double lgs = std::lgamma(lam);
        for (int i = 0; i < 60; ++i) {
            double f = log_reg_upper_gamma(lam, z) - target;
            if (std::fabs(f) < 1e-13)
                break;
            double lpdf = -z + (lam - 1.0) * std::log(z) - lgs;
            // d logQ/dz = -pdf/Q
            double step = f / std::exp(lpdf - log_reg_upper_gamma(lam, z));
            double znew = z + step;
            if (!(znew > 0.0) || !std::isfinite(znew))
                znew = 0.5 * z;
            z = znew;
        }
        return z / th;
    }
    }
    throw domain_error("baseline_inv_log_sf: unknown kind");
}

double baseline_quantile(const BaselineModel& m, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw domain_error("baseline_quantile: u must lie in (0,1)");
    // log sf target = log(1-u); log1p keeps u near 1 accurate.
    return baseline_inv_log_sf(m, std::log1p(-u));
}

} // namespace gemo
