// riskgrad command line: risk measures, derivative estimators, identity
// suites, heavy-tail ladders, portfolio optimization and sample
// generation, with reproducible seeds and machine-readable reports.

#include "riskgrad/heavy_tail.hpp"
#include "riskgrad/parallel.hpp"
#include "riskgrad/portfolio_opt.hpp"
#include "riskgrad/report.hpp"
#include "riskgrad/stats.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <optional>
#include <string>

using json = nlohmann::json;
using namespace riskgrad;

namespace {

constexpr const char* kVersion = "0.1.0";

// ----------------------------------------------------------------- utils

Vector parse_vector(const std::string& text) {
    std::vector<double> vals;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!cur.empty()) vals.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    require(!vals.empty(), "empty vector argument");
    Vector v(static_cast<Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Index>(i)) = vals[i];
    return v;
}

Matrix parse_matrix(const std::string& text) {
    std::vector<Vector> rows;
    std::string cur;
    for (char ch : text + ";") {
        if (ch == ';') {
            if (!cur.empty()) rows.push_back(parse_vector(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    require(!rows.empty(), "empty matrix argument");
    Matrix m(static_cast<Index>(rows.size()), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == m.cols(), "ragged matrix argument");
        m.row(static_cast<Index>(i)) = rows[i].transpose();
    }
    return m;
}

json to_json(const Vector& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const Matrix& m) {
    json a = json::array();
    for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
    return a;
}

FileFormat format_of(const std::string& path) {
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? FileFormat::json
                                                                       : FileFormat::csv;
}

// -------------------------------------------------------------- options

struct CommonOpts {
    std::string format = "json";
    std::uint64_t seed = 42;
    int threads = 0;
};

struct DataOpts {
    std::string scenarios;
    std::string weights;
    double alpha = 0.95;
};

struct ModelOpts {
    std::string model; // gaussian | student-t | pareto | iid-pareto | ...
    std::string mu;
    std::string sigma;
    double nu = 6.0;
    double kappa = 3.0;
    std::string scales = "1";
    double rho = 0.0;
    long long n = 1000000;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", o.threads, "Worker count bound (0 = default)")
        ->capture_default_str();
}

void add_data(CLI::App* cmd, DataOpts& o) {
    cmd->add_option("--scenarios", o.scenarios, "Scenario file (.csv or .json)")->required();
    cmd->add_option("--weights", o.weights, "Portfolio weights, comma separated")->required();
    cmd->add_option("--alpha", o.alpha, "Confidence level in (0,1)")->capture_default_str();
}

ScenarioMatrix load_data(const DataOpts& o) {
    return load_scenarios(o.scenarios, format_of(o.scenarios));
}

std::optional<EllipticalModel> elliptical_of(const ModelOpts& m) {
    if (m.model == "gaussian")
        return EllipticalModel::gaussian(parse_vector(m.mu), parse_matrix(m.sigma));
    if (m.model == "student-t")
        return EllipticalModel::student_t(parse_vector(m.mu), parse_matrix(m.sigma), m.nu);
    return std::nullopt;
}

std::optional<HeavyTailModel> heavy_tail_of(const ModelOpts& m) {
    if (m.model == "iid-pareto")
        return HeavyTailModel::iid_pareto(m.kappa, parse_vector(m.scales));
    if (m.model == "comonotonic-pareto")
        return HeavyTailModel::comonotonic_pareto(m.kappa, parse_vector(m.scales));
    if (m.model == "student-t-mv")
        return HeavyTailModel::student_t(m.nu, parse_vector(m.scales), m.rho);
    return std::nullopt;
}

json model_json(const ModelOpts& m) {
    json j{{"model", m.model}};
    if (m.model == "gaussian" || m.model == "student-t") {
        j["mu"] = m.mu;
        j["sigma"] = m.sigma;
        if (m.model == "student-t") j["nu"] = m.nu;
    } else if (m.model == "student-t-mv") {
        j["nu"] = m.nu;
        j["scales"] = m.scales;
        j["rho"] = m.rho;
    } else if (!m.model.empty()) {
        j["kappa"] = m.kappa;
        j["scales"] = m.scales;
    }
    return j;
}

// report envelope: config carries everything needed to reproduce the
// result block from scratch
struct Report {
    json doc;
    bool numerical_flag = false;

    Report(const std::string& command, const CommonOpts& o) {
        doc["command"] = command;
        doc["version"] = kVersion;
        // record the requested bound, not the effective worker count, so
        // identical argv yields identical bytes for any RISKGRAD_THREADS
        doc["config"] = {{"seed", o.seed}, {"threads", o.threads}, {"format", o.format}};
    }
    void config(const std::string& key, const json& v) { doc["config"][key] = v; }
    void result(json r) { doc["result"] = std::move(r); }
};

void print_text(const json& j, std::ostream& os, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_object()) {
            os << pad << it.key() << ":\n";
            print_text(*it, os, indent + 2);
        } else {
            os << pad << it.key() << ": " << it->dump() << "\n";
        }
    }
}

int emit(const Report& rep, const CommonOpts& o) {
    if (o.format == "json")
        std::cout << rep.doc.dump(2) << "\n";
    else {
        std::cout << "== " << rep.doc["command"].get<std::string>() << " ==\n";
        print_text(rep.doc["result"], std::cout);
    }
    return rep.numerical_flag ? 2 : 0;
}

KernelSpec kernel_of(double bandwidth, const std::string& kernel) {
    const KernelKind kind =
        kernel == "epanechnikov" ? KernelKind::epanechnikov : KernelKind::gaussian;
    return bandwidth > 0.0 ? KernelSpec::manual(bandwidth, kind) : KernelSpec::auto_rule(kind);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"risk measures, their derivatives and heavy-tail asymptotics"};
    app.require_subcommand(1);

    // ---- risk ----
    CommonOpts risk_common;
    DataOpts risk_data;
    auto* cmd_risk = app.add_subcommand("risk", "VaR and ES of a scenario set");
    add_common(cmd_risk, risk_common);
    add_data(cmd_risk, risk_data);

    // ---- grad ----
    CommonOpts grad_common;
    DataOpts grad_data;
    std::string grad_mode = "discrete";
    double grad_bw = 0.0;
    std::string grad_kernel = "gaussian";
    auto* cmd_grad = app.add_subcommand("grad", "VaR and ES gradients");
    add_common(cmd_grad, grad_common);
    add_data(cmd_grad, grad_data);
    cmd_grad->add_option("--mode", grad_mode, "discrete (atom) or kernel estimators")
        ->check(CLI::IsMember({"discrete", "kernel"}))
        ->capture_default_str();
    cmd_grad->add_option("--bandwidth", grad_bw, "Kernel bandwidth (0 = rule)")
        ->capture_default_str();
    cmd_grad->add_option("--kernel", grad_kernel, "gaussian or epanechnikov")
        ->capture_default_str();

    // ---- hessian ----
    CommonOpts hess_common;
    DataOpts hess_data;
    double hess_bw = 0.0;
    std::string hess_kernel = "gaussian";
    auto* cmd_hess = app.add_subcommand("hessian", "Kernel ES Hessian");
    add_common(cmd_hess, hess_common);
    add_data(cmd_hess, hess_data);
    cmd_hess->add_option("--bandwidth", hess_bw, "Kernel bandwidth (0 = rule)")
        ->capture_default_str();
    cmd_hess->add_option("--kernel", hess_kernel, "gaussian or epanechnikov")
        ->capture_default_str();

    // ---- allocate ----
    CommonOpts alloc_common;
    DataOpts alloc_data;
    std::string alloc_mode = "discrete";
    auto* cmd_alloc = app.add_subcommand("allocate", "Euler capital allocation x_i dES/dx_i");
    add_common(cmd_alloc, alloc_common);
    add_data(cmd_alloc, alloc_data);
    cmd_alloc->add_option("--mode", alloc_mode, "discrete or kernel gradients")
        ->check(CLI::IsMember({"discrete", "kernel"}))
        ->capture_default_str();

    // ---- convexity ----
    CommonOpts conv_common;
    DataOpts conv_data;
    double conv_bw = 0.0;
    std::string conv_kernel = "gaussian";
    auto* cmd_conv = app.add_subcommand("convexity", "Hessian-representation PSD diagnostic");
    add_common(cmd_conv, conv_common);
    add_data(cmd_conv, conv_data);
    cmd_conv->add_option("--bandwidth", conv_bw, "Kernel bandwidth (0 = rule)")
        ->capture_default_str();
    cmd_conv->add_option("--kernel", conv_kernel, "gaussian or epanechnikov")
        ->capture_default_str();

    // ---- identity ----
    CommonOpts id_common;
    DataOpts id_data;
    std::string id_check = "all";
    double id_bw = 0.0;
    auto* cmd_id = app.add_subcommand("identity", "Gradient identity residual suites for ES");
    add_common(cmd_id, id_common);
    add_data(cmd_id, id_data);
    cmd_id->add_option("--check", id_check, "level, tail, homogeneity or all")
        ->check(CLI::IsMember({"level", "tail", "homogeneity", "all"}))
        ->capture_default_str();
    cmd_id->add_option("--bandwidth", id_bw, "Kernel bandwidth (0 = rule)")
        ->capture_default_str();

    // ---- tail ----
    CommonOpts tail_common;
    std::string tail_analysis = "es-var";
    std::string tail_scenarios;
    std::string tail_weights = "1";
    std::string tail_alphas;
    long long tail_k_order = 0;
    ModelOpts tail_model;
    auto* cmd_tail = app.add_subcommand("tail", "Tail index and heavy-tail limit ladders");
    add_common(cmd_tail, tail_common);
    cmd_tail->add_option("--analysis,--ratio", tail_analysis,
                         "hill, es-var, second-moment or correlation")
        ->check(CLI::IsMember({"hill", "es-var", "second-moment", "correlation"}))
        ->capture_default_str();
    cmd_tail->add_option("--scenarios", tail_scenarios, "Scenario file (instead of a model)");
    cmd_tail->add_option("--weights", tail_weights, "Portfolio weights")->capture_default_str();
    cmd_tail->add_option("--alphas", tail_alphas, "Ladder levels, comma separated");
    cmd_tail->add_option("--k-order", tail_k_order, "Hill order statistics (0 = n^0.6)")
        ->capture_default_str();
    cmd_tail->add_option("--model", tail_model.model,
                         "pareto | student-t | gaussian | iid-pareto | comonotonic-pareto | "
                         "student-t-mv");
    cmd_tail->add_option("--kappa", tail_model.kappa, "Tail index")->capture_default_str();
    cmd_tail->add_option("--nu", tail_model.nu, "Degrees of freedom")->capture_default_str();
    auto* tail_scales_opt = cmd_tail->add_option("--scales", tail_model.scales,
                                                 "Model scales (default: ones like --weights)");
    cmd_tail->add_option("--rho", tail_model.rho, "Equicorrelation")->capture_default_str();
    cmd_tail->add_option("--n", tail_model.n, "Sample size for model paths")
        ->capture_default_str();

    // ---- optimize ----
    CommonOpts opt_common;
    std::string opt_mu, opt_sigma, opt_scenarios;
    std::string opt_family = "gaussian";
    double opt_nu = 6.0, opt_alpha = 0.95, opt_rp = 0.0, opt_gtol = 0.0;
    long long opt_n = 0;
    auto* cmd_opt = app.add_subcommand("optimize", "Mean-ES portfolio choice");
    add_common(cmd_opt, opt_common);
    cmd_opt->add_option("--mu", opt_mu, "Expected losses, comma separated")->required();
    cmd_opt->add_option("--target-rp", opt_rp, "Portfolio mean-loss target")->required();
    cmd_opt->add_option("--alpha", opt_alpha, "ES confidence level")->capture_default_str();
    cmd_opt->add_option("--sigma", opt_sigma, "Covariance rows 'a,b;c,d' (analytic path)");
    cmd_opt->add_option("--family", opt_family, "gaussian or student-t")
        ->check(CLI::IsMember({"gaussian", "student-t"}))
        ->capture_default_str();
    cmd_opt->add_option("--nu", opt_nu, "Student-t degrees of freedom")->capture_default_str();
    cmd_opt->add_option("--scenarios", opt_scenarios, "Scenario file (sample path)");
    cmd_opt->add_option("--n", opt_n, "Generate n scenarios from the model (sample path)")
        ->capture_default_str();
    cmd_opt->add_option("--gtol", opt_gtol, "Projected-gradient tolerance (0 = default)")
        ->capture_default_str();

    // ---- sample ----
    CommonOpts smp_common;
    ModelOpts smp_model;
    std::string smp_out;
    auto* cmd_smp = app.add_subcommand("sample", "Generate scenarios from a model");
    add_common(cmd_smp, smp_common);
    cmd_smp->add_option("--model", smp_model.model,
                        "gaussian | student-t | iid-pareto | comonotonic-pareto | student-t-mv")
        ->required();
    cmd_smp->add_option("--mu", smp_model.mu, "Mean vector (elliptical)");
    cmd_smp->add_option("--sigma", smp_model.sigma, "Covariance rows 'a,b;c,d' (elliptical)");
    cmd_smp->add_option("--nu", smp_model.nu, "Degrees of freedom")->capture_default_str();
    cmd_smp->add_option("--kappa", smp_model.kappa, "Pareto tail index")->capture_default_str();
    cmd_smp->add_option("--scales", smp_model.scales, "Per-asset scales")->capture_default_str();
    cmd_smp->add_option("--rho", smp_model.rho, "Equicorrelation")->capture_default_str();
    cmd_smp->add_option("--n", smp_model.n, "Sample size")->capture_default_str();
    cmd_smp->add_option("--out", smp_out, "Output scenario file (.csv or .json)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // normalize parse failures to exit 1
    }

    try {
        // ---- risk ----
        if (cmd_risk->parsed()) {
            parallel::set_max_threads(risk_common.threads);
            Report rep("risk", risk_common);
            const auto s = load_data(risk_data);
            const Weights x{parse_vector(risk_data.weights)};
            const auto ve = var_es(s, x, ConfidenceLevel{risk_data.alpha});
            rep.config("alpha", risk_data.alpha);
            rep.config("scenarios", risk_data.scenarios);
            rep.config("n", s.scenarios());
            rep.result({{"var", ve.var},
                        {"es", ve.es},
                        {"tail_prob", ve.tail_prob},
                        {"n", s.scenarios()},
                        {"d", s.assets()}});
            return emit(rep, risk_common);
        }

        // ---- grad ----
        if (cmd_grad->parsed()) {
            parallel::set_max_threads(grad_common.threads);
            Report rep("grad", grad_common);
            const auto s = load_data(grad_data);
            const Weights x{parse_vector(grad_data.weights)};
            const ConfidenceLevel a{grad_data.alpha};
            const auto mode =
                grad_mode == "discrete" ? GradientMode::discrete : GradientMode::kernel;
            const auto r = risk_report(s, x, a, mode, kernel_of(grad_bw, grad_kernel));
            rep.config("alpha", grad_data.alpha);
            rep.config("mode", grad_mode);
            if (mode == GradientMode::kernel) rep.config("bandwidth", r.bandwidth);
            rep.result({{"var", r.var},
                        {"es", r.es},
                        {"var_gradient", to_json(r.var_gradient)},
                        {"es_gradient", to_json(r.es_gradient)},
                        {"mode", grad_mode}});
            return emit(rep, grad_common);
        }

        // ---- hessian ----
        if (cmd_hess->parsed()) {
            parallel::set_max_threads(hess_common.threads);
            Report rep("hessian", hess_common);
            const auto s = load_data(hess_data);
            const Weights x{parse_vector(hess_data.weights)};
            const ConfidenceLevel a{hess_data.alpha};
            const auto k = kernel_of(hess_bw, hess_kernel);
            const Matrix h = es_hessian(s, x, a, k);
            Eigen::SelfAdjointEigenSolver<Matrix> es(h);
            const Vector ev = es.eigenvalues();
            const bool psd = ev.minCoeff() >= -Tolerances::psd_rel * std::abs(h.trace());
            rep.config("alpha", hess_data.alpha);
            rep.config("bandwidth", k.resolve(portfolio_loss(s, x)));
            rep.result(
                {{"es_hessian", to_json(h)}, {"eigenvalues", to_json(ev)}, {"psd", psd}});
            rep.numerical_flag = !psd;
            return emit(rep, hess_common);
        }

        // ---- allocate ----
        if (cmd_alloc->parsed()) {
            parallel::set_max_threads(alloc_common.threads);
            Report rep("allocate", alloc_common);
            const auto s = load_data(alloc_data);
            const Weights x{parse_vector(alloc_data.weights)};
            const ConfidenceLevel a{alloc_data.alpha};
            const auto mode =
                alloc_mode == "discrete" ? GradientMode::discrete : GradientMode::kernel;
            const auto r = risk_report(s, x, a, mode);
            rep.config("alpha", alloc_data.alpha);
            rep.config("mode", alloc_mode);
            rep.result({{"components", to_json(r.allocation)},
                        {"total", r.allocation_total},
                        {"es", r.es},
                        {"euler_gap", r.euler_gap}});
            return emit(rep, alloc_common);
        }

        // ---- convexity ----
        if (cmd_conv->parsed()) {
            parallel::set_max_threads(conv_common.threads);
            Report rep("convexity", conv_common);
            const auto s = load_data(conv_data);
            const Weights x{parse_vector(conv_data.weights)};
            const auto r = convexity_check(s, x, ConfidenceLevel{conv_data.alpha},
                                           kernel_of(conv_bw, conv_kernel));
            rep.config("alpha", conv_data.alpha);
            rep.config("bandwidth", r.bandwidth);
            rep.result({{"matrix", to_json(r.matrix)},
                        {"min_eigenvalue", r.min_eigenvalue},
                        {"min_eigenvalue_deflated", r.min_eigenvalue_deflated},
                        {"cov_min_eigenvalue", r.cov_min_eigenvalue},
                        {"trace", r.trace},
                        {"t", r.t},
                        {"psd", r.psd}});
            rep.numerical_flag = !r.psd;
            return emit(rep, conv_common);
        }

        // ---- identity ----
        if (cmd_id->parsed()) {
            parallel::set_max_threads(id_common.threads);
            Report rep("identity", id_common);
            const auto s = load_data(id_data);
            const Weights x{parse_vector(id_data.weights)};
            const ConfidenceLevel a{id_data.alpha};
            const auto k = kernel_of(id_bw, "gaussian");
            const EsMeasure es_measure{a};
            rep.config("alpha", id_data.alpha);
            json result;
            bool flagged = false;
            if (id_check == "level" || id_check == "all") {
                const auto r = generic_gradient_identity(s, x, es_measure, 0.0, k);
                result["level"] = {{"residual", to_json(r.residual)},
                                   {"residual_norm", r.residual.norm()},
                                   {"gradient_norm", r.gradient.norm()},
                                   {"density", r.density},
                                   {"low_density", r.low_density}};
                flagged = flagged || r.low_density;
            }
            if (id_check == "tail" || id_check == "all") {
                const auto ve = var_es(s, x, a);
                const auto r = tail_gradient_identity(s, x, es_measure, ve.var - ve.es);
                result["tail"] = {{"residual", to_json(r.residual)},
                                  {"residual_norm", r.residual.norm()},
                                  {"gradient_norm", r.gradient.norm()},
                                  {"integral", to_json(r.integral)},
                                  {"integral_norm", r.integral.norm()},
                                  {"tail_prob", r.tail_prob},
                                  {"truncation", to_json(r.truncation)}};
            }
            if (id_check == "homogeneity" || id_check == "all") {
                const auto r = homogeneity_identity(s, x, es_measure, 0.0, k);
                result["homogeneity"] = {
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"lhs_stderr", r.lhs_stderr},
                    {"within_two_se", std::abs(r.lhs) <= 2 * r.lhs_stderr}};
            }
            rep.result(std::move(result));
            rep.numerical_flag = flagged;
            return emit(rep, id_common);
        }

        // ---- tail ----
        if (cmd_tail->parsed()) {
            parallel::set_max_threads(tail_common.threads);
            Report rep("tail", tail_common);
            if (tail_scales_opt->count() == 0) {
                // scales default to a unit vector of the weights' dimension
                const Index d = parse_vector(tail_weights).size();
                tail_model.scales = "1";
                for (Index i = 1; i < d; ++i) tail_model.scales += ",1";
            }
            rep.config("analysis", tail_analysis);
            rep.config("model", model_json(tail_model));
            std::vector<double> alphas = kDefaultAlphaLadder;
            if (!tail_alphas.empty()) {
                alphas.clear();
                const Vector av = parse_vector(tail_alphas);
                for (Index i = 0; i < av.size(); ++i) alphas.push_back(av(i));
            }

            // data source: explicit scenarios or a generated model sample;
            // elliptical names without --mu stay analytic (no sampling)
            std::optional<ScenarioMatrix> data;
            if (!tail_scenarios.empty()) {
                data.emplace(load_scenarios(tail_scenarios, format_of(tail_scenarios)));
                rep.config("scenarios", tail_scenarios);
            } else if (auto ht = heavy_tail_of(tail_model)) {
                data.emplace(sample(*ht, tail_model.n, tail_common.seed));
                rep.config("n", tail_model.n);
            } else if (!tail_model.mu.empty()) {
                if (auto el = elliptical_of(tail_model)) {
                    data.emplace(sample(*el, tail_model.n, tail_common.seed));
                    rep.config("n", tail_model.n);
                }
            }

            json result;
            if (tail_analysis == "hill") {
                require(data.has_value(), "hill needs --scenarios or a sampling model");
                const Weights x{parse_vector(tail_weights)};
                const Vector loss = portfolio_loss(*data, x);
                const Index k = tail_k_order > 0 ? static_cast<Index>(tail_k_order)
                                                 : hill_default_k(loss.size());
                const auto est = hill_estimator(loss, k);
                result = {{"kappa_hat", est.kappa_hat},
                          {"k_order", est.k_order},
                          {"stderr", est.stderr_}};
            } else if (tail_analysis == "es-var") {
                if (!data.has_value()) {
                    // analytic ladders, no sampling
                    AnalyticTailModel m;
                    if (tail_model.model == "pareto")
                        m = AnalyticTailModel{AnalyticTail::pareto, tail_model.kappa};
                    else if (tail_model.model == "student-t")
                        m = AnalyticTailModel{AnalyticTail::student_t, tail_model.nu};
                    else if (tail_model.model == "gaussian")
                        m = AnalyticTailModel{AnalyticTail::gaussian, 0.0};
                    else
                        throw ValidationError("es-var needs a model or --scenarios");
                    const auto ladder = es_var_ratio_ladder(m, alphas);
                    result = {{"alphas", alphas},
                              {"ratios", ladder.ratios},
                              {"target", ladder.target},
                              {"converged", ladder.converged},
                              {"path", "analytic"}};
                } else {
                    const Weights x{parse_vector(tail_weights)};
                    const double kap = tail_model.model == "student-t-mv" ? tail_model.nu
                                                                          : tail_model.kappa;
                    const auto ladders = es_var_ratio_ladder(*data, x, kap, alphas);
                    result = {{"alphas", alphas},
                              {"ratios", ladders.value_ratio.ratios},
                              {"target", ladders.value_ratio.target},
                              {"converged", ladders.value_ratio.converged},
                              {"gradient_ratios", to_json(ladders.gradient_ratios)},
                              {"path", "sample"}};
                }
            } else if (tail_analysis == "second-moment") {
                auto ht = heavy_tail_of(tail_model);
                require(ht.has_value(), "second-moment needs a heavy-tail sampling model");
                const Weights x{parse_vector(tail_weights)};
                const auto out = second_moment_ratio_ladder(*ht, x, alphas, tail_model.n,
                                                            tail_common.seed);
                result = {{"alphas", alphas},
                          {"ratios", out.portfolio_ratio.ratios},
                          {"target", out.portfolio_ratio.target},
                          {"converged", out.portfolio_ratio.converged},
                          {"level_form", out.level_form}};
                rep.config("n", tail_model.n);
            } else { // correlation
                require(data.has_value(),
                        "correlation needs --scenarios or a sampling model");
                const Weights x{parse_vector(tail_weights)};
                json ladder = json::array();
                for (double a : alphas) {
                    const auto r = tail_correlation(*data, x, ConfidenceLevel{a});
                    ladder.push_back({{"alpha", a},
                                      {"corr", to_json(r.corr)},
                                      {"n_tail", r.n_tail},
                                      {"max_distance_from_one", r.max_distance_from_one}});
                }
                result = {{"ladder", std::move(ladder)}};
            }
            rep.result(std::move(result));
            return emit(rep, tail_common);
        }

        // ---- optimize ----
        if (cmd_opt->parsed()) {
            parallel::set_max_threads(opt_common.threads);
            Report rep("optimize", opt_common);
            MeanRiskProblem p;
            p.mu = parse_vector(opt_mu);
            p.target_rp = opt_rp;
            p.alpha = opt_alpha;
            rep.config("alpha", opt_alpha);
            rep.config("target_rp", opt_rp);

            SolveResult res;
            std::string path;
            if (!opt_scenarios.empty()) {
                const auto s = load_scenarios(opt_scenarios, format_of(opt_scenarios));
                SolveOptions so = sample_defaults();
                if (opt_gtol > 0) so.gtol = opt_gtol;
                res = solve_mean_es(p, s, so);
                path = "sample";
                rep.config("scenarios", opt_scenarios);
            } else {
                require(!opt_sigma.empty(), "optimize needs --sigma or --scenarios");
                const Matrix sigma = parse_matrix(opt_sigma);
                const auto model = opt_family == "gaussian"
                                       ? EllipticalModel::gaussian(p.mu, sigma)
                                       : EllipticalModel::student_t(p.mu, sigma, opt_nu);
                if (opt_n > 0) {
                    const ScenarioMatrix s{sample(model, opt_n, opt_common.seed)};
                    SolveOptions so = sample_defaults();
                    if (opt_gtol > 0) so.gtol = opt_gtol;
                    res = solve_mean_es(p, s, so);
                    path = "sample";
                    rep.config("n", opt_n);
                } else {
                    SolveOptions so = analytic_defaults();
                    if (opt_gtol > 0) so.gtol = opt_gtol;
                    res = solve_mean_es(p, model, so);
                    path = "analytic";
                }
            }
            rep.result({{"weights", to_json(res.weights)},
                        {"es", res.es_value},
                        {"iterations", res.iterations},
                        {"converged", res.converged},
                        {"projected_grad_norm", res.projected_grad_norm},
                        {"stationarity", res.stationarity},
                        {"multipliers", to_json(res.multipliers)},
                        {"feasibility_mu", res.feasibility_mu},
                        {"feasibility_budget", res.feasibility_budget},
                        {"path", path}});
            rep.numerical_flag = !res.converged;
            return emit(rep, opt_common);
        }

        // ---- sample ----
        if (cmd_smp->parsed()) {
            parallel::set_max_threads(smp_common.threads);
            Report rep("sample", smp_common);
            Matrix out;
            if (auto el = elliptical_of(smp_model))
                out = sample(*el, smp_model.n, smp_common.seed);
            else if (auto ht = heavy_tail_of(smp_model))
                out = sample(*ht, smp_model.n, smp_common.seed);
            else
                throw ValidationError("unknown model '" + smp_model.model + "'");
            const ScenarioMatrix s{std::move(out)};
            save_scenarios(s, smp_out, format_of(smp_out));
            rep.config("model", model_json(smp_model));
            rep.config("n", smp_model.n);
            rep.result({{"path", smp_out}, {"n", s.scenarios()}, {"d", s.assets()}});
            return emit(rep, smp_common);
        }
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
