#include "gemo/inference.hpp"

#include "gemo/error.hpp"
#include "gemo/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace gemo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// step scale for centered difference derivatives, near eps^(1/3)
const double kDiffStep = std::cbrt(std::numeric_limits<double>::epsilon());

double sample_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v)
        s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

// moment-style starting values for the baseline-only anchor fit
std::vector<double> baseline_moment_init(BaselineKind kind, const Dataset& data) {
    double m = sample_mean(data.values);
    double v = std::max(sample_var(data.values, m), 1e-12 * m * m);
    std::vector<double> logs(data.values.size());
    std::transform(data.values.begin(), data.values.end(), logs.begin(),
                   [](double x) { return std::log(x); });
    double lm = sample_mean(logs);
    double ls = std::sqrt(std::max(sample_var(logs, lm), 1e-6));
    switch (kind) {
    case BaselineKind::Exponential:
        return {1.0 / m};
    case BaselineKind::Weibull: {
        // gumbel moments of log data: sd = pi/(shape sqrt 6)
        double shape = std::clamp(1.2825498301618641 / ls, 0.05, 100.0);
        double scale = std::exp(lm + 0.5772156649015329 / shape);
        return {shape, scale};
    }
    case BaselineKind::Gamma:
        return {std::max(m * m / v, 0.05), std::max(m / v, 1e-8)};
    case BaselineKind::Lomax:
        // shape 2.5 with the scale chosen to match the sample mean
        return {1.5 * m, 2.5};
    case BaselineKind::LogNormal:
        return {lm, ls};
    }
    throw domain_error("unknown baseline kind");
}

// internal optimizer coordinates: log of each positive parameter, the
// lognormal location kept as-is; values beyond the guards are rejected so
// runaway starts cannot masquerade as optima
struct Problem {
    const Dataset* data;
    BaselineKind kind;
    std::vector<double> theta;      // full natural coordinates, fixed in place
    std::vector<int> free_idx;
    std::vector<bool> log_coord;    // per full coordinate

    int dim() const { return static_cast<int>(free_idx.size()); }

    double to_internal(int coord, double natural) const {
        return log_coord[coord] ? std::log(natural) : natural;
    }

    double to_natural(int coord, double z) const {
        return log_coord[coord] ? std::exp(z) : z;
    }

    std::vector<double> natural_point(const std::vector<double>& z) const {
        std::vector<double> out = theta;
        for (int i = 0; i < dim(); ++i)
            out[free_idx[i]] = to_natural(free_idx[i], z[i]);
        return out;
    }

    double value(const std::vector<double>& z) const {
        for (int i = 0; i < dim(); ++i) {
            double bound = log_coord[free_idx[i]] ? 20.0 : 1e3;
            if (!std::isfinite(z[i]) || std::fabs(z[i]) > bound)
                return kInf;
        }
        GemoParams p = params_from_vector(kind, natural_point(z));
        double ll = log_likelihood(p, *data);
        return std::isfinite(ll) ? -ll : kInf;
    }

    std::vector<double> gradient(const std::vector<double>& z, double f0) const {
        std::vector<double> g(dim());
        std::vector<double> w = z;
        for (int i = 0; i < dim(); ++i) {
            double h = kDiffStep * std::max(1.0, std::fabs(z[i]));
            w[i] = z[i] + h;
            double fp = value(w);
            w[i] = z[i] - h;
            double fm = value(w);
            w[i] = z[i];
            if (std::isfinite(fp) && std::isfinite(fm))
                g[i] = (fp - fm) / (2.0 * h);
            else if (std::isfinite(fm))
                g[i] = (f0 - fm) / h;
            else if (std::isfinite(fp))
                g[i] = (fp - f0) / h;
            else
                g[i] = 0.0;
        }
        return g;
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::fabs(x));
    return m;
}

struct LineResult {
    double step = 0.0;
    double f = kInf;
    std::vector<double> grad;
    bool ok = false;
};

// sufficient decrease by backtracking, then a curvature probe that expands
// the step while the directional derivative stays strongly negative
LineResult line_search(const Problem& prob, const std::vector<double>& z,
                       const std::vector<double>& d, double f0, double dphi0) {
    const double c1 = 1e-4;
    const double c2 = 0.9;
    auto at = [&](double a) {
        std::vector<double> w(z.size());
        for (size_t i = 0; i < z.size(); ++i)
            w[i] = z[i] + a * d[i];
        return w;
    };
    double a = 1.0;
    double fa = kInf;
    bool found = false;
    for (int k = 0; k < 60; ++k) {
        fa = prob.value(at(a));
        if (fa <= f0 + c1 * a * dphi0) {
            found = true;
            break;
        }
        a *= 0.5;
    }
    LineResult res;
    if (!found)
        return res;
    std::vector<double> w = at(a);
    std::vector<double> ga = prob.gradient(w, fa);
    double dphi = dot(ga, d);
    for (int k = 0; k < 10 && dphi < c2 * dphi0; ++k) {
        // still descending faster than the curvature condition allows
        double a2 = 2.0 * a;
        std::vector<double> w2 = at(a2);
        double fa2 = prob.value(w2);
        if (!(fa2 <= f0 + c1 * a2 * dphi0))
            break;
        a = a2;
        fa = fa2;
        w = std::move(w2);
        ga = prob.gradient(w, fa);
        dphi = dot(ga, d);
    }
    res.step = a;
    res.f = fa;
    res.grad = std::move(ga);
    res.ok = true;
    return res;
}

struct MinResult {
    std::vector<double> z;
    double f = kInf;
    double scaled_grad = kInf;
    bool converged = false;
};

// bfgs on the inverse hessian approximation with identity resets when the
// search direction loses descent or a line search stalls
MinResult minimize(const Problem& prob, std::vector<double> z, int max_iter,
                   double gtol) {
    int n = prob.dim();
    Matrix H(n, std::vector<double>(n, 0.0));
    auto reset = [&] {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                H[i][j] = (i == j) ? 1.0 : 0.0;
    };
    reset();
    MinResult res;
    double f = prob.value(z);
    if (!std::isfinite(f)) {
        res.z = z;
        return res;
    }
    std::vector<double> g = prob.gradient(z, f);
    int stalls = 0;
    int small_steps = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
        double scaled = sup_norm(g) / std::max(1.0, std::fabs(f));
        if (scaled <= gtol) {
            res.converged = true;
            break;
        }
        std::vector<double> d(n);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                s -= H[i][j] * g[j];
            d[i] = s;
        }
        double dphi0 = dot(d, g);
        if (!(dphi0 < 0.0)) {
            reset();
            for (int i = 0; i < n; ++i)
                d[i] = -g[i];
            dphi0 = dot(d, g);
            if (!(dphi0 < 0.0))
                break;
        }
        LineResult ls = line_search(prob, z, d, f, dphi0);
        if (!ls.ok) {
            if (++stalls >= 2)
                break;
            reset();
            continue;
        }
        stalls = 0;
        std::vector<double> s(n), y(n);
        for (int i = 0; i < n; ++i) {
            s[i] = ls.step * d[i];
            y[i] = ls.grad[i] - g[i];
        }
        double sty = dot(s, y);
        if (sty > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            // inverse bfgs update H <- (I - r s y')H(I - r y s') + r s s'
            double rho = 1.0 / sty;
            std::vector<double> Hy(n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    Hy[i] += H[i][j] * y[j];
            double yHy = dot(y, Hy);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    H[i][j] += rho * ((1.0 + rho * yHy) * s[i] * s[j] -
                                      Hy[i] * s[j] - s[i] * Hy[j]);
        } else {
            reset();
        }
        double fprev = f;
        for (int i = 0; i < n; ++i)
            z[i] += s[i];
        f = ls.f;
        g = std::move(ls.grad);
        if (std::fabs(fprev - f) <= 1e-13 * std::max(1.0, std::fabs(f))) {
            if (++small_steps >= 3)
                break;
        } else {
            small_steps = 0;
        }
    }
    res.z = std::move(z);
    res.f = f;
    res.scaled_grad = sup_norm(prob.gradient(res.z, f)) / std::max(1.0, std::fabs(f));
    res.converged = res.converged || res.scaled_grad <= gtol;
    return res;
}

// uniform in (0,1) from the top 53 bits, identical on every platform
double next_uniform(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

// jacobi eigendecomposition for small symmetric matrices
void jacobi_eigen(Matrix a, std::vector<double>& eigvals, Matrix& eigvecs) {
    int n = static_cast<int>(a.size());
    eigvecs.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        eigvecs[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                off += a[i][j] * a[i][j];
        if (off < 1e-300)
            break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300)
                    continue;
                double phi = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                double c = std::cos(phi), s = std::sin(phi);
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = eigvecs[k][p], vkq = eigvecs[k][q];
                    eigvecs[k][p] = c * vkp - s * vkq;
                    eigvecs[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    eigvals.resize(n);
    for (int i = 0; i < n; ++i)
        eigvals[i] = a[i][i];
}

// in-place inverse through the cholesky factor; false when not positive
// definite
bool cholesky_inverse(Matrix a, Matrix& inv) {
    int n = static_cast<int>(a.size());
    Matrix L(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (int k = 0; k < j; ++k)
                s -= L[i][k] * L[j][k];
            if (i == j) {
                if (!(s > 0.0))
                    return false;
                L[i][i] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    // columns of the inverse by forward/back substitution
    inv.assign(n, std::vector<double>(n, 0.0));
    std::vector<double> e(n), y(n);
    for (int c = 0; c < n; ++c) {
        std::fill(e.begin(), e.end(), 0.0);
        e[c] = 1.0;
        for (int i = 0; i < n; ++i) {
            double s = e[i];
            for (int k = 0; k < i; ++k)
                s -= L[i][k] * y[k];
            y[i] = s / L[i][i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[i];
            for (int k = i + 1; k < n; ++k)
                s -= L[k][i] * inv[k][c];
            inv[i][c] = s / L[i][i];
        }
    }
    return true;
}

} // namespace

Dataset make_dataset(std::vector<double> values, std::string label) {
    if (values.size() < 2)
        throw data_error("dataset needs at least 2 observations");
    for (double x : values)
        if (!std::isfinite(x) || x <= 0.0)
            throw data_error("dataset values must be positive and finite");
    Dataset d;
    d.label = std::move(label);
    d.sorted_values = values;
    std::sort(d.sorted_values.begin(), d.sorted_values.end());
    d.values = std::move(values);
    return d;
}

std::vector<double> param_vector(const GemoParams& p) {
    std::vector<double> v{p.alpha, p.beta, p.gamma};
    v.insert(v.end(), p.baseline.params.begin(), p.baseline.params.end());
    return v;
}

GemoParams params_from_vector(BaselineKind kind, const std::vector<double>& v) {
    size_t pc = param_count(kind);
    if (v.size() != 3 + pc)
        throw domain_error("coordinate vector has the wrong length");
    GemoParams p{v[0], v[1], v[2],
                 BaselineModel{kind, std::vector<double>(v.begin() + 3, v.end())}};
    validate(p);
    return p;
}

std::vector<std::string> coordinate_names(BaselineKind kind) {
    std::vector<std::string> names{"alpha", "beta", "gamma"};
    for (const auto& n : param_names(kind))
        names.push_back(n);
    return names;
}

double log_likelihood(const GemoParams& p, const Dataset& data) {
    validate(p);
    double s = 0.0;
    for (double x : data.values) {
        double lp = gemo_logpdf(p, x);
        if (!std::isfinite(lp))
            return -kInf;
        s += lp;
    }
    return s;
}

namespace {

// shared per-observation sums behind the score and hessian formulas:
// t = Fbar^gamma and d = 1 - (1-alpha) t, the survival-ratio denominator
struct ScoreSums {
    double sum_L = 0.0;        // sum ln Fbar
    double sum_logD = 0.0;     // sum ln d
    double sum_tD = 0.0;       // sum t/d
    double sum_LtD = 0.0;      // sum L t/d
    double sum_t2D2 = 0.0;     // sum (t/d)^2
};

ScoreSums score_sums(const GemoParams& p, const Dataset& data) {
    ScoreSums s;
    for (double x : data.values) {
        double L = baseline_log_sf(p.baseline, x);
        double em = std::expm1(p.gamma * L);
        double d = p.alpha - (1.0 - p.alpha) * em;
        double t = em + 1.0;
        s.sum_L += L;
        s.sum_logD += std::log(d);
        s.sum_tD += t / d;
        s.sum_LtD += L * t / d;
        s.sum_t2D2 += (t / d) * (t / d);
    }
    return s;
}

} // namespace

std::array<double, 3> score_gemo(const GemoParams& p, const Dataset& data) {
    validate(p);
    ScoreSums s = score_sums(p, data);
    double n = static_cast<double>(data.n());
    double da = n * p.beta / p.alpha - (p.beta + 1.0) * s.sum_tD;
    double db = n / p.beta + n * std::log(p.alpha) + p.gamma * s.sum_L - s.sum_logD;
    double dg = n / p.gamma + p.beta * s.sum_L +
                (p.beta + 1.0) * (1.0 - p.alpha) * s.sum_LtD;
    return {da, db, dg};
}

double d2_loglik_dalpha2(const GemoParams& p, const Dataset& data) {
    ScoreSums s = score_sums(p, data);
    double n = static_cast<double>(data.n());
    return -n * p.beta / (p.alpha * p.alpha) + (p.beta + 1.0) * s.sum_t2D2;
}

double d2_loglik_dbeta2(const GemoParams& p, const Dataset& data) {
    return -static_cast<double>(data.n()) / (p.beta * p.beta);
}

double d2_loglik_dalpha_dbeta(const GemoParams& p, const Dataset& data) {
    ScoreSums s = score_sums(p, data);
    return static_cast<double>(data.n()) / p.alpha - s.sum_tD;
}

Matrix observed_information(const GemoParams& p, const Dataset& data) {
    validate(p);
    std::vector<double> theta = param_vector(p);
    BaselineKind kind = p.baseline.kind;
    int m = static_cast<int>(theta.size());
    std::vector<std::string> names = coordinate_names(kind);
    auto ll = [&](const std::vector<double>& v) {
        return log_likelihood(params_from_vector(kind, v), data);
    };
    // positive coordinates keep the step inside the domain
    std::vector<double> h(m);
    for (int r = 0; r < m; ++r) {
        h[r] = kDiffStep * std::max(1.0, std::fabs(theta[r]));
        if (theta[r] > 0.0 && theta[r] - h[r] <= 0.0)
            h[r] = 0.5 * theta[r];
    }
    double f0 = ll(theta);
    Matrix info(m, std::vector<double>(m, 0.0));
    std::vector<double> w = theta;
    for (int r = 0; r < m; ++r) {
        w[r] = theta[r] + h[r];
        double fp = ll(w);
        w[r] = theta[r] - h[r];
        double fm = ll(w);
        w[r] = theta[r];
        double second = (fp - 2.0 * f0 + fm) / (h[r] * h[r]);
        if (!std::isfinite(second))
            throw numerical_error("observed information not finite at coordinate " +
                                  names[r]);
        info[r][r] = -second;
        for (int c = r + 1; c < m; ++c) {
            w[r] = theta[r] + h[r];
            w[c] = theta[c] + h[c];
            double fpp = ll(w);
            w[c] = theta[c] - h[c];
            double fpm = ll(w);
            w[r] = theta[r] - h[r];
            double fmm = ll(w);
            w[c] = theta[c] + h[c];
            double fmp = ll(w);
            w[r] = theta[r];
            w[c] = theta[c];
            double mixed = (fpp - fpm - fmp + fmm) / (4.0 * h[r] * h[c]);
            if (!std::isfinite(mixed))
                throw numerical_error("observed information not finite at coordinates " +
                                      names[r] + "," + names[c]);
            info[r][c] = info[c][r] = -mixed;
        }
    }
    return info;
}

FitResult fit(const Dataset& data, BaselineKind kind,
              std::vector<bool> free_mask, const FitOptions& options) {
    size_t m = 3 + param_count(kind);
    if (free_mask.empty())
        free_mask.assign(m, true);
    if (free_mask.size() != m)
        throw domain_error("free mask has the wrong length");
    if (std::none_of(free_mask.begin(), free_mask.end(), [](bool b) { return b; }))
        throw domain_error("at least one coordinate must be free");
    if (options.starts < 1)
        throw domain_error("starts must be at least 1");

    // fixed values and the anchor come from the caller or from defaults
    std::vector<double> theta0;
    if (options.init) {
        if (options.init->baseline.kind != kind)
            throw domain_error("init parameters use a different baseline");
        validate(*options.init);
        theta0 = param_vector(*options.init);
    } else {
        theta0 = {1.0, 1.0, 1.0};
        auto b = baseline_moment_init(kind, data);
        theta0.insert(theta0.end(), b.begin(), b.end());
    }
    if (!options.fixed.empty()) {
        std::vector<std::string> names = coordinate_names(kind);
        for (const auto& [name, value] : options.fixed) {
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end())
                throw domain_error("no coordinate named '" + name + "' in this model");
            theta0[static_cast<size_t>(it - names.begin())] = value;
        }
        params_from_vector(kind, theta0);    // surfaces invalid overrides now
    }

    Problem prob;
    prob.data = &data;
    prob.kind = kind;
    prob.theta = theta0;
    prob.log_coord.assign(m, true);
    if (kind == BaselineKind::LogNormal)
        prob.log_coord[3] = false;      // location parameter may be negative

    // anchor stage: polish the free baseline coordinates with the gemo shape
    // parameters pinned, so every multistart run begins near the data scale
    std::vector<int> base_idx;
    for (size_t r = 3; r < m; ++r)
        if (free_mask[r])
            base_idx.push_back(static_cast<int>(r));
    if (!base_idx.empty()) {
        Problem anchor = prob;
        anchor.free_idx = base_idx;
        std::vector<double> z0(base_idx.size());
        for (size_t i = 0; i < base_idx.size(); ++i)
            z0[i] = anchor.to_internal(base_idx[i], theta0[base_idx[i]]);
        MinResult a = minimize(anchor, std::move(z0), options.max_iterations,
                               options.gradient_tolerance);
        if (std::isfinite(a.f))
            prob.theta = anchor.natural_point(a.z);
    }

    for (size_t r = 0; r < m; ++r)
        if (free_mask[r])
            prob.free_idx.push_back(static_cast<int>(r));
    int dim = prob.dim();
    std::vector<double> z_anchor(dim);
    for (int i = 0; i < dim; ++i)
        z_anchor[i] = prob.to_internal(prob.free_idx[i], prob.theta[prob.free_idx[i]]);

    // start 0 is the anchor itself, the rest perturb every free coordinate
    // by a factor in [1/5, 5] (additive +-ln 5 for the lognormal location)
    std::mt19937_64 gen(options.seed);
    const double spread = std::log(5.0);
    MinResult best;
    int best_start = -1;
    for (int s = 0; s < options.starts; ++s) {
        std::vector<double> z = z_anchor;
        if (s > 0)
            for (int i = 0; i < dim; ++i)
                z[i] += (2.0 * next_uniform(gen) - 1.0) * spread;
        MinResult r = minimize(prob, std::move(z), options.max_iterations,
                               options.gradient_tolerance);
        if (best_start < 0 || r.f < best.f) {
            best = std::move(r);
            best_start = s;
        }
    }
    if (!std::isfinite(best.f)) {
        std::ostringstream msg;
        msg << "all " << options.starts << " starts failed to reach a finite "
            << "log-likelihood (best objective " << best.f << ")";
        throw numerical_error(msg.str());
    }

    FitResult out;
    out.params = params_from_vector(kind, prob.natural_point(best.z));
    out.free_mask = free_mask;
    out.names = coordinate_names(kind);
    out.loglik = -best.f;
    out.n_starts = options.starts;
    out.gradient_norm = best.scaled_grad;
    out.converged = best.scaled_grad <= 1e-6;

    // covariance block over the free coordinates from the observed
    // information, spd solve first and spectral pseudo-inverse as fallback
    out.std_errors.assign(m, 0.0);
    try {
        Matrix full_info = observed_information(out.params, data);
        Matrix block(dim, std::vector<double>(dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                block[i][j] = full_info[prob.free_idx[i]][prob.free_idx[j]];
        std::vector<double> eig;
        Matrix vec;
        jacobi_eigen(block, eig, vec);
        double emax = 0.0, emin = kInf;
        for (double e : eig) {
            emax = std::max(emax, std::fabs(e));
            emin = std::min(emin, std::fabs(e));
        }
        bool pd = std::all_of(eig.begin(), eig.end(), [](double e) { return e > 0.0; });
        out.ridge_warning = !pd || emin <= 0.0 || emax / emin > 1e8;
        Matrix cov_block;
        if (!cholesky_inverse(block, cov_block)) {
            // spectral pseudo-inverse over the positive part, so the
            // covariance stays positive semidefinite under hessian noise
            cov_block.assign(dim, std::vector<double>(dim, 0.0));
            for (int k = 0; k < dim; ++k) {
                if (!(eig[k] > emax * 1e-12))
                    continue;
                double inv = 1.0 / eig[k];
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        cov_block[i][j] += inv * vec[i][k] * vec[j][k];
            }
        }
        out.covariance.assign(m, std::vector<double>(m, 0.0));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out.covariance[prob.free_idx[i]][prob.free_idx[j]] = cov_block[i][j];
        for (int i = 0; i < dim; ++i) {
            double v = cov_block[i][i];
            out.std_errors[prob.free_idx[i]] = v >= 0.0 ? std::sqrt(v) : kNan;
        }
    } catch (const numerical_error&) {
        // hessian evaluation failed: estimates stand, uncertainties do not
        out.covariance.clear();
        std::fill(out.std_errors.begin(), out.std_errors.end(), kNan);
        out.ridge_warning = true;
    }
    return out;
}

std::vector<CiRow> asymptotic_ci(const FitResult& fit, double level, bool log_scale) {
    if (!(level > 0.0 && level < 1.0))
        throw domain_error("confidence level must lie in (0, 1)");
    if (fit.covariance.empty())
        throw numerical_error("fit carries no covariance matrix");
    double z = norm_quantile(0.5 * (1.0 + level));
    std::vector<double> theta = param_vector(fit.params);
    bool lognormal = fit.params.baseline.kind == BaselineKind::LogNormal;
    std::vector<CiRow> rows;
    for (size_t r = 0; r < theta.size(); ++r) {
        if (!fit.free_mask[r])
            continue;
        double se = fit.std_errors[r];
        if (!std::isfinite(se))
            throw numerical_error("standard error unavailable for " + fit.names[r]);
        CiRow row{fit.names[r], theta[r], se, 0.0, 0.0};
        bool positive = !(lognormal && r == 3);
        if (log_scale && positive) {
            // delta method on ln theta keeps the interval positive
            double sl = se / theta[r];
            row.lower = theta[r] * std::exp(-z * sl);
            row.upper = theta[r] * std::exp(z * sl);
        } else {
            row.lower = theta[r] - z * se;
            row.upper = theta[r] + z * se;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

LrtResult likelihood_ratio_test(const FitResult& full, const FitResult& restricted) {
    if (full.params.baseline.kind != restricted.params.baseline.kind)
        throw domain_error("likelihood ratio test needs a common baseline");
    if (full.free_mask.size() != restricted.free_mask.size())
        throw domain_error("fit results are not comparable");
    int df = 0;
    for (size_t r = 0; r < full.free_mask.size(); ++r) {
        if (restricted.free_mask[r] && !full.free_mask[r])
            throw domain_error("restricted model is not nested in the full model");
        if (full.free_mask[r] && !restricted.free_mask[r])
            ++df;
    }
    if (full.loglik < restricted.loglik - 1e-6)
        throw domain_error("full model fits worse than its restriction; refit");
    LrtResult res;
    res.statistic = std::max(0.0, 2.0 * (full.loglik - restricted.loglik));
    res.df = df;
    res.p_value = df == 0 ? 1.0 : chi_squared_sf(res.statistic, df);
    return res;
}

double chi_squared_sf(double x, int df) {
    if (df < 1)
        throw domain_error("degrees of freedom must be positive");
    if (x < 0.0)
        throw domain_error("chi-squared statistic must be nonnegative");
    return reg_upper_gamma(0.5 * df, 0.5 * x);
}

} // namespace gemo
