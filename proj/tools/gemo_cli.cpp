// command line front end: dataset ingestion, fitting, model comparison,
// reliability tables, and curve emission for external plotting

#include <CLI11.hpp>
#include <json.hpp>

#include "gemo/error.hpp"
#include "gemo/gof.hpp"
#include "gemo/reliability.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
using namespace gemo;

namespace {

struct ModelSpec {
    std::string name;
    BaselineKind kind;
    bool full = false;      // whole family vs baseline with alpha=beta=gamma=1
};

ModelSpec parse_model(const std::string& name) {
    ModelSpec spec;
    spec.name = name;
    std::string base = name;
    if (base.rfind("gemo-", 0) == 0) {
        spec.full = true;
        base = base.substr(5);
    }
    try {
        spec.kind = baseline_kind_from_name(base);
    } catch (const domain_error&) {
        throw domain_error("unknown model '" + name + "'");
    }
    return spec;
}

Dataset ingest_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error("cannot open dataset file '" + path + "'");
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        for (char& c : line)
            if (c == ',')
                c = ' ';
        std::istringstream ss(line);
        std::string token;
        while (ss >> token) {
            size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size())
                throw data_error("line " + std::to_string(lineno) +
                                 ": cannot parse '" + token + "' as a number");
            if (!(x > 0.0) || !std::isfinite(x))
                throw data_error("line " + std::to_string(lineno) +
                                 ": observation " + token + " is not positive");
            values.push_back(x);
        }
    }
    if (values.empty())
        throw data_error("dataset file '" + path + "' holds no observations");
    return make_dataset(std::move(values), path);
}

// full coordinate vector from a json object keyed by coordinate name;
// alpha, beta, gamma default to 1, baseline parameters are required
GemoParams params_from_json(BaselineKind kind, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw domain_error(std::string("--params is not valid json: ") + e.what());
    }
    if (!j.is_object())
        throw domain_error("--params must be a json object");
    std::vector<std::string> names = coordinate_names(kind);
    std::vector<double> v(names.size());
    for (size_t r = 0; r < names.size(); ++r) {
        if (j.contains(names[r])) {
            if (!j[names[r]].is_number())
                throw domain_error("--params field '" + names[r] + "' must be a number");
            v[r] = j[names[r]].get<double>();
        } else if (r < 3) {
            v[r] = 1.0;
        } else {
            throw domain_error("--params is missing '" + names[r] + "'");
        }
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(names.begin(), names.end(), it.key()) == names.end())
            throw domain_error("--params has no coordinate named '" + it.key() + "'");
    return params_from_vector(kind, v);
}

std::map<std::string, double> parse_fixes(const std::vector<std::string>& fixes) {
    std::map<std::string, double> out;
    for (const auto& f : fixes) {
        size_t eq = f.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == f.size())
            throw domain_error("--fix expects NAME=VALUE, got '" + f + "'");
        std::string name = f.substr(0, eq);
        std::string text = f.substr(eq + 1);
        size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || !std::isfinite(value))
            throw domain_error("--fix value '" + text + "' is not a number");
        out[name] = value;
    }
    return out;
}

std::string fmt7(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw data_error("cannot write to '" + out_path + "'");
    out << text;
}

// shared flag storage for all subcommands
struct Options {
    std::vector<std::string> models;
    std::string data_path;
    std::vector<std::string> fixes;
    std::string params_text;
    int starts = 20;
    std::uint64_t seed = 1;
    int n = 100;
    int grid = 200;
    std::string format;
    std::string out_path;
    std::vector<double> percentiles;
};

ModelSpec single_model(const Options& opt) {
    if (opt.models.size() != 1)
        throw domain_error("this command takes exactly one --model");
    return parse_model(opt.models[0]);
}

struct FittedModel {
    ModelSpec spec;
    FitResult result;
    int k = 0;
    double aic_value = 0.0;
    double ks = 0.0;
    double ad = 0.0;
};

FittedModel run_fit(const ModelSpec& spec, const Dataset& data, const Options& opt) {
    size_t m = 3 + param_count(spec.kind);
    std::vector<bool> mask(m, true);
    if (!spec.full)
        mask[0] = mask[1] = mask[2] = false;
    FitOptions fo;
    fo.starts = opt.starts;
    fo.seed = opt.seed;
    fo.fixed = parse_fixes(opt.fixes);
    for (const auto& [name, value] : fo.fixed) {
        auto names = coordinate_names(spec.kind);
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw domain_error("--fix names no coordinate '" + name + "' of " + spec.name);
        mask[static_cast<size_t>(it - names.begin())] = false;
        (void)value;
    }
    if (!opt.params_text.empty())
        fo.init = params_from_json(spec.kind, opt.params_text);
    FittedModel fm;
    fm.spec = spec;
    fm.result = fit(data, spec.kind, mask, fo);
    fm.k = static_cast<int>(std::count(mask.begin(), mask.end(), true));
    fm.aic_value = aic(fm.result.loglik, fm.k);
    fm.ks = ks_statistic(fm.result.params, data);
    fm.ad = ad_statistic(fm.result.params, data);
    return fm;
}

json estimates_json(const FitResult& r) {
    json est = json::object();
    auto v = param_vector(r.params);
    for (size_t i = 0; i < v.size(); ++i)
        est[r.names[i]] = v[i];
    return est;
}

json ci_json(const std::vector<CiRow>& rows) {
    json out = json::array();
    for (const auto& c : rows)
        out.push_back({{"name", c.name},
                       {"estimate", c.estimate},
                       {"se", c.std_error},
                       {"lower", c.lower},
                       {"upper", c.upper}});
    return out;
}

int cmd_fit(const Options& opt) {
    if (opt.data_path.empty())
        throw domain_error("fit needs --data");
    if (!opt.format.empty() && opt.format != "json")
        throw domain_error("fit emits json only");
    ModelSpec spec = single_model(opt);
    Dataset data = ingest_dataset(opt.data_path);
    FittedModel fm = run_fit(spec, data, opt);
    const FitResult& r = fm.result;
    json out{{"command", "fit"},
             {"model", spec.name},
             {"dataset", {{"path", opt.data_path}, {"n", data.n()}}},
             {"estimates", estimates_json(r)},
             {"loglik", r.loglik},
             {"k", fm.k},
             {"aic", fm.aic_value},
             {"ks", fm.ks},
             {"ad", fm.ad},
             {"converged", r.converged},
             {"n_starts", r.n_starts},
             {"gradient_norm", r.gradient_norm},
             {"ridge_warning", r.ridge_warning},
             {"seed", opt.seed}};
    json se = json::object();
    for (size_t i = 0; i < r.std_errors.size(); ++i)
        if (r.free_mask[i])
            se[r.names[i]] = r.std_errors[i];
    out["std_errors"] = se;
    try {
        out["ci95"] = ci_json(asymptotic_ci(r, 0.95));
        out["ci95_log_scale"] = ci_json(asymptotic_ci(r, 0.95, true));
    } catch (const numerical_error&) {
        out["ci95"] = nullptr;          // hessian was unusable at the optimum
        out["ci95_log_scale"] = nullptr;
    }
    emit(out.dump(2) + "\n", opt.out_path);
    return r.converged ? 0 : 4;
}

// nesting relations by model name, restricted then full
const std::vector<std::pair<std::string, std::string>> kNestedPairs = {
    {"exponential", "weibull"},
    {"exponential", "gamma"},
    {"exponential", "gemo-exponential"},
    {"exponential", "gemo-weibull"},
    {"exponential", "gemo-gamma"},
    {"weibull", "gemo-weibull"},
    {"gamma", "gemo-gamma"},
    {"lomax", "gemo-lomax"},
    {"lognormal", "gemo-lognormal"},
};

int cmd_compare(const Options& opt) {
    if (opt.data_path.empty())
        throw domain_error("compare needs --data");
    if (opt.models.size() < 2)
        throw domain_error("compare needs at least two --model values");
    Dataset data = ingest_dataset(opt.data_path);
    std::vector<FittedModel> fits;
    for (const auto& name : opt.models)
        fits.push_back(run_fit(parse_model(name), data, opt));
    std::stable_sort(fits.begin(), fits.end(),
                     [](const FittedModel& a, const FittedModel& b) {
                         return a.aic_value < b.aic_value;
                     });
    json rows = json::array();
    for (const auto& f : fits)
        rows.push_back({{"model", f.spec.name},
                        {"k", f.k},
                        {"loglik", f.result.loglik},
                        {"aic", f.aic_value},
                        {"ks", f.ks},
                        {"ad", f.ad},
                        {"converged", f.result.converged},
                        {"ridge_warning", f.result.ridge_warning}});
    json lr = json::array();
    for (const auto& [rname, fname] : kNestedPairs) {
        const FittedModel* restricted = nullptr;
        const FittedModel* full = nullptr;
        for (const auto& f : fits) {
            if (f.spec.name == rname)
                restricted = &f;
            if (f.spec.name == fname)
                full = &f;
        }
        if (!restricted || !full)
            continue;
        double stat = std::max(0.0, 2.0 * (full->result.loglik - restricted->result.loglik));
        int df = full->k - restricted->k;
        lr.push_back({{"full", fname},
                      {"restricted", rname},
                      {"statistic", stat},
                      {"df", df},
                      {"p_value", df > 0 ? chi_squared_sf(stat, df) : 1.0}});
    }
    std::string format = opt.format.empty() ? "json" : opt.format;
    if (format == "csv") {
        std::ostringstream csv;
        csv << "model,k,loglik,aic,ks,ad,converged,ridge_warning\n";
        for (const auto& f : fits)
            csv << f.spec.name << ',' << f.k << ',' << fmt7(f.result.loglik) << ','
                << fmt7(f.aic_value) << ',' << fmt7(f.ks) << ',' << fmt7(f.ad) << ','
                << (f.result.converged ? 1 : 0) << ','
                << (f.result.ridge_warning ? 1 : 0) << '\n';
        emit(csv.str(), opt.out_path);
    } else {
        json out{{"command", "compare"},
                 {"dataset", {{"path", opt.data_path}, {"n", data.n()}}},
                 {"rows", rows},
                 {"lr_tests", lr}};
        emit(out.dump(2) + "\n", opt.out_path);
    }
    bool all_converged = std::all_of(fits.begin(), fits.end(),
                                     [](const FittedModel& f) { return f.result.converged; });
    return all_converged ? 0 : 4;
}

// explicit parameters when given, otherwise a fresh fit on the dataset
GemoParams resolve_params(const Options& opt, const ModelSpec& spec) {
    if (!opt.params_text.empty())
        return params_from_json(spec.kind, opt.params_text);
    if (opt.data_path.empty())
        throw domain_error("supply --params or --data to locate the parameters");
    Dataset data = ingest_dataset(opt.data_path);
    return run_fit(spec, data, opt).result.params;
}

int cmd_reliab(const Options& opt) {
    ModelSpec spec = single_model(opt);
    GemoParams p = resolve_params(opt, spec);
    std::vector<double> us = opt.percentiles;
    if (us.empty())
        us = {0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
    ReliabilityTable table = reliability_table(p, us);
    std::ostringstream csv;
    csv << "u,t,mrl,mpl\n";
    for (const auto& row : table.rows)
        csv << fmt7(row.u) << ',' << fmt7(row.t) << ',' << fmt7(row.mrl) << ','
            << fmt7(row.mpl) << '\n';
    emit(csv.str(), opt.out_path);
    return 0;
}

int cmd_ttt(const Options& opt) {
    if (opt.data_path.empty())
        throw domain_error("ttt needs --data");
    Dataset data = ingest_dataset(opt.data_path);
    auto curve = ttt_transform(data);
    std::ostringstream csv;
    csv << "fraction,ttt\n";
    for (const auto& [frac, t] : curve)
        csv << fmt7(frac) << ',' << fmt7(t) << '\n';
    emit(csv.str(), opt.out_path);
    return 0;
}

int cmd_sample(const Options& opt) {
    ModelSpec spec = single_model(opt);
    if (opt.params_text.empty())
        throw domain_error("sample needs explicit --params");
    GemoParams p = params_from_json(spec.kind, opt.params_text);
    if (opt.n < 1)
        throw domain_error("--n must be positive");
    std::vector<double> draws = gemo_sample(p, static_cast<size_t>(opt.n), opt.seed);
    std::ostringstream csv;
    csv << "x\n";
    for (double x : draws)
        csv << fmt7(x) << '\n';
    emit(csv.str(), opt.out_path);
    return 0;
}

int cmd_eval(const Options& opt) {
    ModelSpec spec = single_model(opt);
    if (opt.params_text.empty())
        throw domain_error("eval needs explicit --params");
    GemoParams p = params_from_json(spec.kind, opt.params_text);
    if (opt.grid < 2)
        throw domain_error("--grid must be at least 2");
    double lo = gemo_quantile(p, 1e-4);
    double hi = gemo_quantile(p, 1.0 - 1e-4);
    std::ostringstream csv;
    csv << "x,pdf,cdf,sf,hrf\n";
    for (int i = 0; i < opt.grid; ++i) {
        double x = lo + (hi - lo) * i / (opt.grid - 1.0);
        csv << fmt7(x) << ',' << fmt7(gemo_pdf(p, x)) << ',' << fmt7(gemo_cdf(p, x))
            << ',' << fmt7(gemo_sf(p, x)) << ',' << fmt7(gemo_hrf(p, x)) << '\n';
    }
    emit(csv.str(), opt.out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reliability modeling with the generalized exponentiated "
                 "marshall-olkin family"};
    app.require_subcommand(1);
    Options opt;
    int rc = 0;

    auto add_common = [&](CLI::App* cmd, bool csv_default) {
        cmd->add_option("--model", opt.models, "model name, e.g. weibull or gemo-weibull");
        cmd->add_option("--data", opt.data_path, "path to a lifetime data file");
        cmd->add_option("--fix", opt.fixes, "pin a coordinate, NAME=VALUE");
        cmd->add_option("--params", opt.params_text, "parameter values as a json object");
        cmd->add_option("--starts", opt.starts, "multistart count")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", opt.seed, "random seed");
        cmd->add_option("--out", opt.out_path, "write output to a file");
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember(csv_default ? std::vector<std::string>{"csv"}
                                              : std::vector<std::string>{"json", "csv"}));
    };

    auto* c_fit = app.add_subcommand("fit", "maximum likelihood fit of one model");
    add_common(c_fit, false);
    c_fit->callback([&] { rc = cmd_fit(opt); });

    auto* c_cmp = app.add_subcommand("compare", "fit several models and rank by aic");
    add_common(c_cmp, false);
    c_cmp->callback([&] { rc = cmd_compare(opt); });

    auto* c_rel = app.add_subcommand("reliab", "percentile table of mrl and mpl");
    add_common(c_rel, true);
    c_rel->add_option("--percentiles", opt.percentiles, "comma separated list in (0,1)")
        ->delimiter(',');
    c_rel->callback([&] { rc = cmd_reliab(opt); });

    auto* c_ttt = app.add_subcommand("ttt", "scaled total time on test curve");
    add_common(c_ttt, true);
    c_ttt->callback([&] { rc = cmd_ttt(opt); });

    auto* c_smp = app.add_subcommand("sample", "seeded draws from a model");
    add_common(c_smp, true);
    c_smp->add_option("--n", opt.n, "number of draws")->check(CLI::PositiveNumber);
    c_smp->callback([&] { rc = cmd_sample(opt); });

    auto* c_evl = app.add_subcommand("eval", "pdf/cdf/sf/hrf over a quantile grid");
    add_common(c_evl, true);
    c_evl->add_option("--grid", opt.grid, "number of grid points");
    c_evl->callback([&] { rc = cmd_eval(opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
