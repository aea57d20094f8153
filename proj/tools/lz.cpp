// lz: command-line front end.
//
//   lz <command> --config <file> [--out <path>] [--format json|text|csv] [--threads N]
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include "config_schema.hpp"
#include "report.hpp"
#include "schema.hpp"

#include "lz/core/parallel.hpp"
#include "lz/geometry/benchmarks.hpp"
#include "lz/geometry/curvature.hpp"
#include "lz/geometry/fd_oracle.hpp"
#include "lz/minkmodel/contour.hpp"
#include "lz/specoracle/mode_sum.hpp"
#include "lz/zeta/density.hpp"
#include "lz/zeta/spectral_action.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>

namespace fs = std::filesystem;
namespace bm = lz::benchmarks;
using namespace lz;
using namespace lz::cli;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct RunConfig {
    std::string command;
    nlohmann::json raw;
    fs::path base;
    std::vector<std::string> warnings;

    bool has(const char* k) const { return raw.contains(k); }
    template <class T>
    T get(const char* k, T fallback) const { return raw.contains(k) ? raw[k].get<T>() : fallback; }
    double tol(const char* k, double fallback) const {
        return raw.contains("tolerances") ? raw["tolerances"].value(k, fallback) : fallback;
    }
    void warn(const std::string& w) {
        spdlog::warn("{}", w);
        warnings.push_back(w);
    }
};

RunConfig load_config(const std::string& command, const std::string& path) {
    RunConfig c;
    c.command = command;
    c.raw = MetricField::parse_json(MetricField::read_file(path));
    validate(c.raw, nlohmann::json::parse(kConfigSchema));
    if (c.has("command") && c.raw["command"] != command)
        throw ValidationError("config is for '" + c.raw["command"].get<std::string>() + "', not '" + command + "'");
    c.base = fs::path(path).parent_path();
    return c;
}

std::string resolve(const RunConfig& c, const std::string& p) {
    const fs::path q(p);
    return (q.is_absolute() ? q : c.base / q).string();
}

struct LoadedMetric {
    std::string name;
    MetricField metric;
    std::vector<double> point;
};

LoadedMetric load_metric(const RunConfig& c) {
    if (c.has("metric") == c.has("benchmark")) throw ValidationError("config needs exactly one of 'metric' or 'benchmark'");
    std::optional<LoadedMetric> out;
    if (c.has("benchmark")) {
        const auto name = c.raw["benchmark"].get<std::string>();
        if (name == "minkowski") out = LoadedMetric{name, bm::minkowski(), {0, 0, 0, 0}};
        if (name == "sphere3_times_circle") out = LoadedMetric{name, bm::sphere3_times_circle(), {1.0, 1.0, 0.0, 0.0}};
        for (const auto& b : bm::lorentzian_suite())
            if (b.name == name) out = LoadedMetric{name, b.metric, b.point};
        if (!out) throw ValidationError("unknown benchmark '" + name + "'");
    } else if (c.raw["metric"].is_string()) {
        const auto path = resolve(c, c.raw["metric"].get<std::string>());
        const auto j = MetricField::parse_json(MetricField::read_file(path));
        out = LoadedMetric{j.value("name", fs::path(path).stem().string()), MetricField::from_json(j), {}};
    } else {
        out = LoadedMetric{c.raw["metric"].value("name", std::string("inline")), MetricField::from_json(c.raw["metric"]), {}};
    }
    if (c.has("point")) out->point = c.raw["point"].get<std::vector<double>>();
    if (out->point.empty()) throw ValidationError("config needs 'point' for a metric file");
    if (static_cast<int>(out->point.size()) != out->metric.dim()) throw ValidationError("'point' length differs from metric dim");
    return *out;
}

std::optional<SpectralModel> load_model(const RunConfig& c) {
    if (!c.has("model")) return std::nullopt;
    if (c.raw["model"].is_string())
        return SpectralModel::from_json(
            MetricField::parse_json(MetricField::read_file(resolve(c, c.raw["model"].get<std::string>()))));
    return SpectralModel::from_json(c.raw["model"]);
}

TransportOptions transport_options(const RunConfig& c) {
    TransportOptions o;
    o.tol = c.tol("transport", o.tol);
    o.r_max = c.tol("normal_radius", o.r_max);
    o.chart_degree = c.raw.contains("tolerances") ? c.raw["tolerances"].value("chart_degree", o.chart_degree) : o.chart_degree;
    return o;
}

ojson metric_info(const LoadedMetric& m) {
    return ojson{{"name", m.name}, {"dim", m.metric.dim()}, {"signature", to_string(m.metric.signature())},
                 {"point", m.point}};
}

// Jet curvature is exact up to rounding; its error scales with the largest
// lowered Riemann component.
double jet_rounding(const CurvatureBundle& b) {
    double s = 1.0;
    for (double r : b.riemann) s = std::max(s, std::abs(r));
    for (double g : b.inverse) s = std::max(s, std::abs(g));
    return 256.0 * kEps * s * s;
}

// ---------------------------------------------------------------- curvature

Report cmd_curvature(RunConfig& c) {
    const auto m = load_metric(c);
    const auto b = curvature(m.metric, m.point);
    const double h = 1e-3;
    const auto fd = oracle::fd_curvature(m.metric, m.point, h);
    const auto fd2 = oracle::fd_curvature(m.metric, m.point, 2 * h);
    const double fd_err = std::abs(fd.scalar - fd2.scalar);
    const double jet_err = jet_rounding(b);
    const int n = b.n;

    Report r;
    r.json["command"] = "curvature";
    r.json["metric"] = metric_info(m);
    r.json["scalar_curvature"] = val(b.scalar, jet_err);
    r.json["oracle"] = ojson{{"method", "finite_difference"}, {"step", h}, {"scalar_curvature", val(fd.scalar, fd_err)}};
    r.json["deviation"] = val(std::abs(b.scalar - fd.scalar), fd_err + jet_err);
    ojson ric = ojson::array();
    for (int k = 0; k < n; ++k) {
        ojson row = ojson::array();
        for (int l = 0; l < n; ++l) row.push_back(val(b.ric(k, l), jet_err));
        ric.push_back(row);
    }
    r.json["ricci"] = ric;
    r.json["symmetry_defect"] = val(b.symmetry_defect(), jet_err);

    Table t({"quantity", "jet value", "error", "fd oracle", "fd error"});
    t.row({"R", num(b.scalar), err(jet_err), num(fd.scalar), err(fd_err)});
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l)
            if (std::abs(b.ric(k, l)) > jet_err || k == l)
                t.row({fmt::format("Ric[{}][{}]", k, l), num(b.ric(k, l)), err(jet_err)});
    t.row({"symmetry defect", num(b.symmetry_defect()), err(jet_err)});
    r.text = fmt::format("curvature of {} at ({})\n\n", m.name, fmt::join(m.point, ", ")) + t.render();
    return r;
}

// ---------------------------------------------------------------- hadamard

Report cmd_hadamard(RunConfig& c) {
    const auto m = load_metric(c);
    const int N = c.get("order", 2);
    const auto h = transport_solve(m.metric, m.point, N, transport_options(c));

    Report r;
    r.json["command"] = "hadamard";
    r.json["metric"] = metric_info(m);
    r.json["order"] = N;
    ojson coeffs = ojson::array();
    Table t({"k", "u_k(x,x)", "error"});
    for (int k = 0; k <= N; ++k) {
        coeffs.push_back(ojson{{"center", h.center}, {"k", k}, {"diag_value", h.diag_values[k]},
                               {"error_estimate", h.diag_errors[k]}});
        t.row({std::to_string(k), num(h.diag_values[k]), err(h.diag_errors[k])});
    }
    r.json["coefficients"] = coeffs;
    r.text = fmt::format("Hadamard coefficients of {} at ({}), N = {}\n\n", m.name, fmt::join(m.point, ", "), N) + t.render();

    if (N >= 1) {
        const auto b = curvature(m.metric, m.point);
        const double R_err = jet_rounding(b);
        const double direct = diagonal_u1_direct(m.metric, m.point, 4);
        const double direct_err = std::abs(direct - diagonal_u1_direct(m.metric, m.point, 6)) + 64 * kEps * std::max(1.0, std::abs(direct));
        const double u1 = h.diag_values[1], u1_err = h.diag_errors[1];
        r.json["u1_check"] = ojson{
            {"transport", val(u1, u1_err)},
            {"direct", val(direct, direct_err)},
            {"minus_R_over_6", val(-b.scalar / 6.0, R_err / 6.0)},
            {"transport_vs_curvature", val(std::abs(u1 + b.scalar / 6.0), u1_err + R_err / 6.0)},
            {"transport_vs_direct", val(std::abs(u1 - direct), u1_err + direct_err)},
        };
        Table u({"path", "u_1(x,x)", "error", "|u_1 + R/6|"});
        u.row({"transport", num(u1), err(u1_err), err(std::abs(u1 + b.scalar / 6.0))});
        u.row({"direct", num(direct), err(direct_err), err(std::abs(direct + b.scalar / 6.0))});
        u.row({"-R/6", num(-b.scalar / 6.0), err(R_err / 6.0)});
        r.text += "\n" + u.render();
    }
    return r;
}

// ---------------------------------------------------------------- zeta-residue

cplx leading_residue(int n) {
    return MeromorphicDensity(n, std::vector<double>(n, 0.0), 0.1, {1.0}).residue_at(0.5 * n).analytic;
}

// Extrapolation spread plus the worst rung error.
double ladder_error(const EpsilonLadder& l, const std::vector<double>& rung_errors) {
    return l.error + *std::max_element(rung_errors.begin(), rung_errors.end());
}

ojson ladder_json(const EpsilonLadder& l, const std::vector<double>& rung_errors) {
    ojson rungs = ojson::array();
    for (std::size_t i = 0; i < l.epsilons.size(); ++i)
        rungs.push_back(ojson{{"epsilon", l.epsilons[i]}, {"residue", val(l.values[i], rung_errors[i])}});
    return ojson{{"rungs", rungs}, {"extrapolated", val(l.extrapolated, ladder_error(l, rung_errors))}, {"affine_r2", l.affine_r2}};
}

Report cmd_zeta_residue(RunConfig& c) {
    const auto m = load_metric(c);
    const int n = m.metric.dim();
    if (m.metric.signature() != Signature::Lorentzian) throw ValidationError("zeta-residue needs a Lorentzian metric");
    const double alpha0 = c.get("alpha0", 0.5 * n - 1.0);
    const int N = c.get("order", 2);
    const auto ladder = c.get("epsilon_ladder", default_epsilon_ladder());
    const double rel_tol = c.tol("residue_rel", 1e-3);
    const auto model = load_model(c);

    const auto h = transport_solve(m.metric, m.point, N, transport_options(c));
    const auto base = MeromorphicDensity::from_hadamard(h, n, ladder.front());
    std::vector<double> p_err;
    const auto param = extrapolate_epsilon(
        [&](double e) {
            const auto rr = base.with_epsilon(e).residue_at(alpha0);
            p_err.push_back(rr.error + rr.disagreement);
            return rr.analytic;
        },
        ladder);

    const auto b = curvature(m.metric, m.point);
    const double R_err = jet_rounding(b);
    std::optional<cplx> prediction;
    double pred_err = 0.0;
    std::string pred_kind;
    if (alpha0 == 0.5 * n - 1.0) {
        prediction = curvature_residue_prediction(n, b.scalar);
        pred_err = std::abs(curvature_residue_prediction(n, R_err));
        pred_kind = "scalar curvature";
    } else if (alpha0 == 0.5 * n) {
        prediction = leading_residue(n);
        pred_err = 16 * kEps * std::abs(*prediction);
        pred_kind = "leading term";
    } else {
        c.warn("no closed-form prediction at alpha0 = " + num(alpha0));
    }

    Report r;
    r.json["command"] = "zeta-residue";
    r.json["metric"] = metric_info(m);
    r.json["alpha0"] = alpha0;
    r.json["order"] = N;
    r.json["scalar_curvature"] = val(b.scalar, R_err);
    r.json["parametrix"] = ladder_json(param, p_err);

    std::optional<EpsilonLadder> modes;
    std::vector<double> m_err;
    if (model) {
        if (model->spatial_dim() + 1 != n) throw ValidationError("model spatial_dim + 1 differs from metric dim");
        if (std::abs(b.scalar + model->scalar_curvature()) > 1e-6 * std::max(1.0, std::abs(b.scalar)))
            c.warn("metric R = " + num(b.scalar) + " does not match the ultrastatic model (-R_spatial = " +
                   num(-model->scalar_curvature()) + ")");
        modes = extrapolate_epsilon(
            [&](double e) {
                auto f = [&](cplx a) { return continue_mode_zeta(*model, a, e).value; };
                const cplx fine = circle_integral(f, alpha0, 0.05, 64);
                m_err.push_back(std::abs(fine - circle_integral(f, alpha0, 0.05, 32)));
                return fine;
            },
            ladder);
        r.json["mode_sum"] = ladder_json(*modes, m_err);
        r.json["model"] = model->name();
    } else {
        c.warn("no model file: mode-sum column omitted");
        r.json["mode_sum"] = nullptr;
    }
    r.json["prediction"] = prediction ? ojson{{"kind", pred_kind}, {"residue", val(*prediction, pred_err)}} : ojson(nullptr);

    // Pairwise agreement. Values below 1e-6 of the leading residue count as zero.
    const double null_scale = 1e-6 * std::abs(leading_residue(n));
    struct Col {
        std::string name;
        cplx v;
        double e;
    };
    std::vector<Col> cols{{"parametrix", param.extrapolated, ladder_error(param, p_err)}};
    if (modes) cols.push_back({"mode_sum", modes->extrapolated, ladder_error(*modes, m_err)});
    if (prediction) cols.push_back({"prediction", *prediction, pred_err});
    ojson agree = ojson::array();
    bool all = true;
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t j = i + 1; j < cols.size(); ++j) {
            const double d = std::abs(cols[i].v - cols[j].v);
            const double s = std::max(std::abs(cols[i].v), std::abs(cols[j].v));
            const bool ok = d <= rel_tol * s || s <= null_scale;
            all = all && ok;
            agree.push_back(ojson{{"pair", cols[i].name + " vs " + cols[j].name},
                                  {"deviation", val(d, cols[i].e + cols[j].e)},
                                  {"relative", val(s > 0 ? d / s : 0.0, s > 0 ? (cols[i].e + cols[j].e) / s : 0.0)},
                                  {"agree", ok}});
        }
    r.json["agreement"] = agree;
    r.json["all_agree"] = all;
    r.json["tolerance"] = rel_tol;
    r.json["warnings"] = c.warnings;

    Table t({"source", "residue", "error", "affine R^2"});
    t.row({"parametrix", num(param.extrapolated), err(cols[0].e), fmt::format("{:.6f}", param.affine_r2)});
    if (modes) t.row({"mode sum", num(modes->extrapolated), err(cols[1].e), fmt::format("{:.6f}", modes->affine_r2)});
    if (prediction) t.row({pred_kind, num(*prediction), err(pred_err)});
    Table a({"pair", "|difference|", "relative", "agree"});
    for (const auto& x : agree)
        a.row({x["pair"].get<std::string>(), err(x["deviation"]["value"].get<double>()),
               err(x["relative"]["value"].get<double>()), x["agree"].get<bool>() ? "yes" : "NO"});
    r.text = fmt::format("residue at alpha = {} on {}, eps ladder {} -> 0\n\n", alpha0, m.name, fmt::join(ladder, ", ")) +
             t.render() + "\n" + a.render();
    for (const auto& w : c.warnings) r.text += "warning: " + w + "\n";
    return r;
}

// ---------------------------------------------------------------- contour-check

Report cmd_contour_check(RunConfig& c) {
    const auto sw = c.raw.value("sweep", nlohmann::json::object());
    const auto ws = sw.value("w", std::vector<double>{-3, -1, 0.2, 1, 5});
    const auto as = sw.value("alpha", std::vector<double>{0.5, 1, 1.7, 2.5, 3.3});
    const auto rs = sw.value("r_max", std::vector<double>{0.0});
    const double eps = c.get("epsilon", 0.1);
    const double tail = c.tol("contour_tail", 1e-10);
    const auto P = BranchedPower::principal();

    Report r;
    r.json["command"] = "contour-check";
    r.json["epsilon"] = eps;
    r.json["tail_tolerance"] = tail;
    ojson cells = ojson::array();
    r.csv = "w,alpha,r_max,nodes,re,im,error_estimate,true_error,bound_holds\n";
    Table t({"w", "alpha", "R_max", "nodes", "true error", "estimate", "bound"});
    double worst = 0.0;
    bool bounds = true, monotone = true;
    for (double w : ws)
        for (double a : as) {
            double prev = std::numeric_limits<double>::infinity();
            for (double R : rs) {
                const auto res = contour_power_scalar(w, a, ContourGamma(eps, kPi / 4, R), tail);
                const cplx exact = P(cplx(w, -eps), -a);
                const double e = std::abs(res.value - exact);
                const bool ok = e <= res.error;
                worst = std::max(worst, e);
                bounds = bounds && ok;
                if (rs.size() > 1 && e > prev * 1.0001 + 1e-15) monotone = false;
                prev = e;
                cells.push_back(ojson{{"w", w},
                                      {"alpha", a},
                                      {"r_max", res.truncation},
                                      {"nodes", res.nodes},
                                      {"value", val(res.value, res.error)},
                                      {"reference", val(exact, 4 * kEps * std::abs(exact))},
                                      {"true_error", e},
                                      {"bound_holds", ok}});
                r.csv += fmt::format("{},{},{},{},{:.17g},{:.17g},{:.6e},{:.6e},{}\n", w, a, res.truncation, res.nodes,
                                     res.value.real(), res.value.imag(), res.error, e, ok ? 1 : 0);
                t.row({num(w), num(a), num(res.truncation), std::to_string(res.nodes), err(e), err(res.error),
                       ok ? "holds" : "FAILS"});
            }
        }
    r.json["cells"] = cells;
    r.json["worst_true_error"] = worst;
    r.json["all_bounds_hold"] = bounds;
    if (rs.size() > 1) r.json["monotone_in_r_max"] = monotone;
    r.text = fmt::format("contour quadrature of (w - i eps)^(-alpha), eps = {}\n\n", eps) + t.render() +
             fmt::format("\nworst true error {}, bounds {}\n", err(worst), bounds ? "hold" : "FAIL");
    if (rs.size() > 1) r.text += fmt::format("error monotone in R_max: {}\n", monotone ? "yes" : "no");
    return r;
}

// ---------------------------------------------------------------- cc-expansion

Report cmd_cc_expansion(RunConfig& c) {
    const auto model = load_model(c);
    if (!model) throw ValidationError("cc-expansion needs 'model'");
    TestFunction f = TestFunction::bump();
    if (c.has("test_function")) {
        const auto& tf = c.raw["test_function"];
        f = TestFunction(tf["expression"].get<std::string>(), tf["lower"].get<double>(), tf["upper"].get<double>());
    }
    const auto grid = c.get("lambda_grid", default_lambda_grid());
    const double eps = c.get("epsilon", 1e-2);
    const int terms = c.get("fit_terms", 4);
    double R = -model->scalar_curvature();
    double R_err = 0.0;
    std::string R_source = "model";
    if (c.has("metric") || c.has("benchmark")) {
        const auto m = load_metric(c);
        const auto b = curvature(m.metric, m.point);
        R = b.scalar;
        R_err = jet_rounding(b);
        R_source = m.name;
    }
    ActionOptions opt;
    opt.tol = c.tol("action", opt.tol);
    const auto rep = cc_expansion_check(*model, f, grid, eps, R, terms, opt);

    Report r;
    r.json["command"] = "cc-expansion";
    r.json["model"] = model->name();
    r.json["test_function"] = ojson{{"expression", f.expression()}, {"lower", f.lower()}, {"upper", f.upper()}};
    r.json["epsilon"] = eps;
    r.json["scalar_curvature"] = ojson{{"source", R_source}, {"value", R}, {"error", R_err}};
    ojson sweep = ojson::array();
    r.csv = "lambda,re,im,error,predicted_re,predicted_im\n";
    Table s({"Lambda", "value", "error", "C0 a0 L^4 + C1 a1 L^2"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx pred = rep.expansion.predicted(grid[i]);
        sweep.push_back(ojson{{"lambda", grid[i]}, {"value", val(rep.values[i], rep.errors[i])}});
        r.csv += fmt::format("{},{:.17g},{:.17g},{:.6e},{:.17g},{:.17g}\n", grid[i], rep.values[i].real(),
                             rep.values[i].imag(), rep.errors[i], pred.real(), pred.imag());
        s.row({num(grid[i]), num(rep.values[i]), err(rep.errors[i]), num(pred)});
    }
    r.json["sweep"] = sweep;
    ojson fit = ojson::array();
    for (std::size_t p = 0; p < rep.powers.size(); ++p)
        fit.push_back(ojson{{"power", rep.powers[p]}, {"coefficient", val(rep.fitted[p], rep.fitted_error[p])}});
    r.json["fit"] = ojson{{"terms", fit}, {"residual", rep.fit_residual}, {"condition", rep.condition}};
    const auto& c0 = rep.expansion.coefficients[0];
    const auto& c1 = rep.expansion.coefficients[1];
    const double lead_err = c0.C_error * c0.a;
    const double sub_err = c1.C_error * std::abs(c1.a) + std::abs(c1.C) * std::abs(c1.a / (R == 0 ? 1.0 : R)) * R_err;
    r.json["predicted"] = ojson{{"C0_a0", val(rep.predicted_leading, lead_err)}, {"C1_a1", val(rep.predicted_subleading, sub_err)}};
    r.json["relative_error"] = ojson{{"leading", val(rep.rel_error_leading, rep.fitted_error[0] / std::abs(rep.predicted_leading))},
                                     {"subleading", val(rep.rel_error_subleading, rep.fitted_error[1] / std::max(std::abs(rep.predicted_subleading), 1e-300))}};

    Table t({"term", "fitted", "error", "predicted", "relative error"});
    t.row({"Lambda^4", num(rep.fitted[0]), err(rep.fitted_error[0]), num(rep.predicted_leading), err(rep.rel_error_leading)});
    t.row({"Lambda^2", num(rep.fitted[1]), err(rep.fitted_error[1]), num(rep.predicted_subleading), err(rep.rel_error_subleading)});
    r.text = fmt::format("spectral action sweep on {}, eps = {}, R = {}\n\n", model->name(), eps, num(R)) + s.render() +
             "\n" + t.render();
    return r;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("lz");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("lz: %l: %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("LZ_LOG")) {
        const auto lvl = spdlog::level::from_str(env);
        if (lvl == spdlog::level::off && std::string(env) != "off") spdlog::warn("unknown LZ_LOG level '{}'", env);
        else spdlog::set_level(lvl);
    }
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Lorentzian spectral zeta densities: curvature, Hadamard coefficients, residues and checks"};
    app.require_subcommand(1);
    std::string config, out, format;
    int threads = -1;
    const std::map<std::string, Report (*)(RunConfig&)> commands = {
        {"curvature", cmd_curvature},       {"hadamard", cmd_hadamard},         {"zeta-residue", cmd_zeta_residue},
        {"contour-check", cmd_contour_check}, {"cc-expansion", cmd_cc_expansion},
    };
    for (const auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "run configuration (JSON)")->required();
        sub->add_option("--out", out, "output path (default stdout)");
        sub->add_option("--format", format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
        sub->add_option("--threads", threads, "worker cap, 0 = all cores")->check(CLI::NonNegativeNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = load_config(command, config);
        if (threads < 0) threads = cfg.get("threads", -1);
        if (threads >= 0) set_thread_limit(static_cast<unsigned>(threads));
        const auto outcfg = cfg.raw.value("output", nlohmann::json::object());
        if (format.empty()) format = outcfg.value("format", std::string("json"));
        if (out.empty() && outcfg.contains("path")) out = resolve(cfg, outcfg["path"].get<std::string>());
        spdlog::info("running {} from {}", command, config);

        const Report rep = commands.at(command)(cfg);
        std::string body;
        if (format == "json") body = rep.json.dump(2) + "\n";
        else if (format == "text") body = rep.text;
        else if (rep.csv.empty()) throw ValidationError("csv output is only available for sweep commands");
        else body = rep.csv;

        if (out.empty()) {
            std::cout << body;
        } else {
            std::ofstream f(out);
            if (!f) throw ValidationError("cannot write " + out);
            f << body;
        }
        return 0;
    } catch (const ValidationError& e) {
        spdlog::error("{}", e.what());
        return 2;
    } catch (const NumericalError& e) {
        if (e.achieved_error() >= 0) spdlog::error("{} (achieved {})", e.what(), e.achieved_error());
        else spdlog::error("{}", e.what());
        return 3;
    } catch (const std::exception& e) {
        spdlog::error("internal error: {}", e.what());
        return 1;
    }
}
