#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccdfex/analysis.hpp"
#include "ccdfex/dataio.hpp"
#include "ccdfex/distributions.hpp"
#include "ccdfex/estimators.hpp"
#include "ccdfex/measures.hpp"
#include "ccdfex/numerics.hpp"
#include "ccdfex/simulation.hpp"

namespace {

using namespace ccdfex;

const char* kGrammarHelp =
    "Model specs follow name:key=value,... with names {uniform, sumuniform,\n"
    "gumbeluniform, extremevalue, power, generalpower, downton, product,\n"
    "linear, powertransform}. Nested models sit in parentheses, e.g.\n"
    "  product:m1=exp(rate=1),m2=power(a=2)\n"
    "  linear:base=(uniform:c1=1,c2=1),mu1=2,eta1=1\n"
    "Run `ccdfex catalog` for the entry list and parameter constraints.";

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& flag) {
    const std::size_t comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument(flag + ": expected 't1,t2', got '" + s + "'");
    try {
        std::size_t p1 = 0, p2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double t1 = std::stod(a, &p1);
        const double t2 = std::stod(b, &p2);
        if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
        return {t1, t2};
    } catch (const std::exception&) {
        throw std::invalid_argument(flag + ": expected 't1,t2', got '" + s + "'");
    }
}

std::vector<GridPoint> parse_points(const std::string& s, const std::string& flag) {
    std::vector<GridPoint> pts;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ';')) {
        if (item.empty()) continue;
        const auto [a, b] = parse_pair(item, flag);
        pts.push_back({a, b});
    }
    if (pts.empty()) throw std::invalid_argument(flag + ": no points given");
    return pts;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(item, &pos);
            if (pos != item.size() || v < 2) throw std::invalid_argument("bad");
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw std::invalid_argument("--sizes: expected integers >= 2, got '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("--sizes: empty list");
    return out;
}

std::vector<GridPoint> parse_grid_spec(const std::string& spec, const BivariateModel& m) {
    if (spec == "default") return default_grid(m);
    if (spec.rfind("diag:", 0) == 0) {
        const int n = std::stoi(spec.substr(5));
        return diagonal_points(evaluation_box(m), n);
    }
    const std::size_t x = spec.find('x');
    if (x != std::string::npos) {
        try {
            const int n1 = std::stoi(spec.substr(0, x));
            const int n2 = std::stoi(spec.substr(x + 1));
            return make_grid(evaluation_box(m), n1, n2);
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("--grid: expected 'default', 'N1xN2' or 'diag:N', got '" +
                                spec + "'");
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

nlohmann::json verdict_json(const PropertyVerdict& v) {
    nlohmann::json j;
    j["property"] = v.property;
    j["holds"] = v.holds;
    j["checked"] = v.checked;
    j["tolerance"] = v.tolerance;
    j["worst_violation"] = v.worst_violation;
    j["counterexamples"] = nlohmann::json::array();
    for (const Counterexample& c : v.counterexamples) {
        nlohmann::json e;
        e["t1"] = c.t1;
        e["t2"] = c.t2;
        e["lhs"] = c.lhs;
        e["rhs"] = c.rhs;
        j["counterexamples"].push_back(e);
    }
    return j;
}

struct ComputeArgs {
    std::string model, measure = "ccdfex", t, route = "auto";
    int i = 1;
    double kappa = 0.5, c = 0.0, d = 0.0;
    bool has_c = false, has_d = false;
    std::optional<double> lo_override;
    QuadSpec quad{};
};

int run_compute(const ComputeArgs& a) {
    a.quad.validate();
    const BivariateModel m = parse_model_spec(a.model);
    const auto [t1, t2] = parse_pair(a.t, "--t");
    double value = 0.0;
    if (a.measure == "ccdfex") {
        if (a.route == "closed") {
            if (!m.has_closed_ccdfex())
                throw std::domain_error("model '" + m.name + "' has no closed form");
            value = m.closed_ccdfex(a.i, t1, t2);
        } else if (a.route == "numeric" || a.lo_override) {
            value = failure_extropy_numeric(m, a.i, t1, t2, a.quad, a.lo_override);
        } else {
            value = failure_extropy(m, a.i, t1, t2, a.quad);
        }
    } else if (a.measure == "brhr") {
        value = reversed_hazard(m, a.i, t1, t2);
    } else if (a.measure == "eit") {
        value = inactivity_time(m, a.i, t1, t2, a.quad);
    } else if (a.measure == "entropy") {
        value = failure_entropy(m, a.i, t1, t2, a.quad);
    } else if (a.measure == "df") {
        value = m.cdf(t1, t2);
    } else if (a.measure == "zeta") {
        if (!a.has_c || !a.has_d)
            throw std::invalid_argument("--measure zeta needs --c and --d");
        value = zeta_integral(m, a.i, a.c, a.d, (a.i == 1) ? t2 : t1, a.quad);
    } else if (a.measure == "cond-ccdfex") {
        value = cond_failure_extropy(m, a.i, t1, t2, a.quad, a.kappa);
    } else if (a.measure == "cond-brhr") {
        value = cond_reversed_hazard(m, a.i, t1, t2);
    } else if (a.measure == "cond-eit") {
        value = cond_inactivity_time(m, a.i, t1, t2, a.quad);
    } else {
        throw std::invalid_argument("unknown measure '" + a.measure + "'");
    }
    std::cout << fmt(value) << "\n";
    return 0;
}

struct EstimateArgs {
    std::string data, estimator = "both", t;
    int i = 1;
    double h = 0.0; // 0 = Scott default
    QuadSpec quad{};
};

int run_estimate(const EstimateArgs& a) {
    a.quad.validate();
    const bool emp = a.estimator == "both" || a.estimator == "empirical";
    const bool ker = a.estimator == "both" || a.estimator == "kernel";
    if (!emp && !ker)
        throw std::invalid_argument("--estimator must be empirical, kernel or both");
    const PairedSample s = read_paired_csv(a.data);
    const auto [t1, t2] = parse_pair(a.t, "--t");
    std::ostringstream out;
    out << "# n=" << s.size() << "\n";
    double h = a.h;
    if (ker) {
        if (h <= 0.0) h = scott_bandwidth(s);
        out << "# bandwidth=" << fmt(h) << "\n";
    }
    out << "estimator,value\n";
    if (emp) out << "empirical," << fmt(empirical_failure_extropy(s, a.i, t1, t2)) << "\n";
    if (ker) out << "kernel," << fmt(kernel_failure_extropy(s, a.i, t1, t2, h, a.quad)) << "\n";
    std::cout << out.str();
    return 0;
}

struct SimulateArgs {
    std::string config = "default";
    std::string model, sizes, points, format = "csv", out;
    int component = 1;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    bool has_seed = false, has_reps = false, has_component = false;
    std::optional<double> truth;
};

int run_simulate(const SimulateArgs& a) {
    if (a.config != "default")
        throw std::invalid_argument("--config: only 'default' is available");
    StudyConfig cfg;
    if (!a.model.empty()) {
        cfg.model = parse_model_spec(a.model);
        cfg.model.name = a.model; // report the spec exactly as given
    }
    if (a.has_component) cfg.component = a.component;
    if (!a.sizes.empty()) cfg.sizes = parse_sizes(a.sizes);
    if (a.has_reps) cfg.replications = a.reps;
    if (!a.points.empty()) cfg.eval_points = parse_points(a.points, "--points");
    if (a.has_seed) cfg.seed = a.seed;
    cfg.truth_override = a.truth;
    const StudyReport rep = run_study(cfg);
    if (a.format == "csv") write_output(study_to_csv(rep), a.out);
    else if (a.format == "json") write_output(study_to_json(rep), a.out);
    else throw std::invalid_argument("--format must be csv or json");
    return 0;
}

struct VerifyArgs {
    std::string check, model, other, grid = "default", t, out;
    int i = 1;
    double tol = 1e-9, k = 1.0, step = 1e-3;
    std::size_t draws = 100000;
    std::uint64_t seed = 1;
    double kappa = 0.5;
    QuadSpec quad{};
};

int run_verify(const VerifyArgs& a) {
    a.quad.validate();
    const BivariateModel m = parse_model_spec(a.model);
    nlohmann::json j;
    bool holds = true;
    if (a.check == "eit-bound" || a.check == "entropy-bound" || a.check == "cond-bound" ||
        a.check == "order" || a.check == "proportionality") {
        const std::vector<GridPoint> grid = parse_grid_spec(a.grid, m);
        PropertyVerdict v;
        if (a.check == "eit-bound") v = check_eit_bound(m, a.i, grid, a.tol, a.quad);
        else if (a.check == "entropy-bound")
            v = check_entropy_bound(m, a.i, grid, a.tol, a.quad);
        else if (a.check == "cond-bound")
            v = check_conditional_bound(m, a.i, grid, a.tol, a.quad);
        else if (a.check == "order") {
            if (a.other.empty())
                throw std::invalid_argument("--check order needs --other (the lower model)");
            v = check_extropy_order(m, parse_model_spec(a.other), a.i, grid, a.tol, a.quad);
        } else {
            v = check_proportionality(m, a.k, grid, a.tol, a.quad);
        }
        holds = v.holds;
        j = verdict_json(v);
    } else if (a.check == "characterization") {
        const std::vector<GridPoint> grid = parse_grid_spec(a.grid, m);
        const CharacterizationReport rep = check_characterization(m, grid, a.quad);
        holds = rep.max_deviation <= a.tol;
        j["property"] = "characterization";
        j["holds"] = holds;
        j["checked"] = rep.checked;
        j["max_deviation"] = rep.max_deviation;
        j["tolerance"] = a.tol;
    } else if (a.check == "monotonicity") {
        const std::vector<GridPoint> grid = parse_grid_spec(a.grid, m);
        const MonotonicityReport rep = check_monotonicity(m, a.i, grid, a.tol, a.quad);
        holds = rep.consistent;
        j["property"] = "monotonicity";
        j["holds"] = holds;
        j["checked"] = rep.checked;
        j["increasing_by_criterion"] = rep.increasing_by_criterion;
        j["increasing_by_difference"] = rep.increasing_by_difference;
        j["tolerance"] = rep.tolerance;
        j["disagreements"] = nlohmann::json::array();
        for (const MonotonicityCell& c : rep.disagreements) {
            nlohmann::json e;
            e["t1"] = c.t1;
            e["t2"] = c.t2;
            e["by_criterion"] = c.by_criterion;
            e["by_finite_difference"] = c.by_finite_difference;
            j["disagreements"].push_back(e);
        }
    } else if (a.check == "derivative-identity" || a.check == "cond-derivative-identity") {
        const std::vector<GridPoint> grid = parse_grid_spec(a.grid, m);
        const IdentityCheck rep =
            (a.check == "derivative-identity")
                ? check_derivative_identity(m, a.i, grid, a.step, a.quad)
                : check_cond_derivative_identity(m, a.i, grid, a.step, a.quad);
        holds = rep.max_abs_error <= a.tol;
        j["property"] = a.check;
        j["holds"] = holds;
        j["checked"] = rep.checked;
        j["max_abs_error"] = rep.max_abs_error;
        j["tolerance"] = a.tol;
    } else if (a.check == "zeta") {
        if (a.t.empty()) throw std::invalid_argument("--check zeta needs --t");
        const auto [t1, t2] = parse_pair(a.t, "--t");
        const ZetaCheck rep =
            check_zeta_representation(m, a.i, t1, t2, a.draws, a.seed, a.quad);
        holds = std::abs(rep.zscore) <= 3.0;
        j["property"] = "zeta";
        j["holds"] = holds;
        j["draws"] = rep.draws;
        j["kept"] = rep.kept;
        j["mc_estimate"] = rep.mc_estimate;
        j["target"] = rep.target;
        j["std_error"] = rep.std_error;
        j["zscore"] = rep.zscore;
        j["threshold"] = 3.0;
    } else {
        throw std::invalid_argument(
            "--check must be one of eit-bound, entropy-bound, cond-bound, order, "
            "proportionality, characterization, monotonicity, derivative-identity, "
            "cond-derivative-identity, zeta");
    }
    write_output(j.dump(2) + "\n", a.out);
    if (!holds) {
        std::fprintf(stderr, "verdict: %s violated\n", a.check.c_str());
        return 1;
    }
    return 0;
}

struct GofArgs {
    std::string data, format = "csv", out;
};

int run_gof(const GofArgs& a) {
    const PairedSample s = read_paired_csv(a.data);
    const std::vector<GofReport> reports = {gof_exponential(s.x1, "x1"),
                                            gof_exponential(s.x2, "x2")};
    if (a.format == "csv") write_output(gof_to_csv(reports), a.out);
    else if (a.format == "json") write_output(gof_to_json(reports), a.out);
    else throw std::invalid_argument("--format must be csv or json");
    return 0;
}

struct FigureArgs {
    std::string kind, model, other, out;
    int i = 1;
    int points = 9;
    std::size_t n = 100;
    std::uint64_t seed = 1;
    QuadSpec quad{};
};

int run_figure(const FigureArgs& a) {
    a.quad.validate();
    std::ostringstream out;
    if (a.kind == "fig1" || a.kind == "fig2") {
        const std::string spec = !a.model.empty()
                                     ? a.model
                                     : (a.kind == "fig1" ? "power:m=2,n=2,theta=-1.5"
                                                         : "gumbeluniform:theta=-0.2");
        const BivariateModel m = parse_model_spec(spec);
        out << "t,value\n";
        for (const GridPoint& p : diagonal_points(evaluation_box(m), a.points)) {
            double v;
            if (a.kind == "fig1")
                v = failure_extropy(m, a.i, p.t1, p.t2, a.quad) +
                    0.5 * inactivity_time(m, a.i, p.t1, p.t2, a.quad);
            else
                v = 0.5 * (failure_entropy(m, a.i, p.t1, p.t2, a.quad) -
                           inactivity_time(m, a.i, p.t1, p.t2, a.quad)) -
                    failure_extropy(m, a.i, p.t1, p.t2, a.quad);
            out << fmt(p.t1) << ',' << fmt(v) << "\n";
        }
    } else if (a.kind == "fig3") {
        const BivariateModel upper =
            parse_model_spec(a.model.empty() ? "sumuniform" : a.model);
        const BivariateModel lower =
            parse_model_spec(a.other.empty() ? "uniform:c1=1,c2=1" : a.other);
        out << "t,value\n";
        for (const GridPoint& p : diagonal_points(evaluation_box(upper), a.points)) {
            const double v = failure_extropy(upper, a.i, p.t1, p.t2, a.quad) -
                             failure_extropy(lower, a.i, p.t1, p.t2, a.quad);
            out << fmt(p.t1) << ',' << fmt(v) << "\n";
        }
    } else if (a.kind == "fig4") {
        const BivariateModel m =
            parse_model_spec(a.model.empty() ? "uniform:c1=1,c2=1" : a.model);
        const PairedSample s = sample(m, a.n, a.seed);
        const double h = scott_bandwidth(s);
        out << "t1,t2,truth,empirical,kernel\n";
        for (const GridPoint& p : diagonal_points(evaluation_box(m), a.points)) {
            out << fmt(p.t1) << ',' << fmt(p.t2) << ','
                << fmt(failure_extropy(m, a.i, p.t1, p.t2, a.quad)) << ','
                << fmt(empirical_failure_extropy(s, a.i, p.t1, p.t2)) << ','
                << fmt(kernel_failure_extropy(s, a.i, p.t1, p.t2, h, a.quad)) << "\n";
        }
    } else {
        throw std::invalid_argument("--kind must be fig1, fig2, fig3 or fig4");
    }
    write_output(out.str(), a.out);
    return 0;
}

void add_quad_flags(CLI::App* cmd, QuadSpec& q) {
    cmd->add_option("--abs-tol", q.abs_tol, "absolute quadrature tolerance")
        ->capture_default_str();
    cmd->add_option("--rel-tol", q.rel_tol, "relative quadrature tolerance")
        ->capture_default_str();
    cmd->add_option("--max-depth", q.max_depth, "adaptive bisection depth limit")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bivariate conditional failure extropy toolkit"};
    app.require_subcommand(1);
    app.footer(kGrammarHelp);

    ComputeArgs ca;
    CLI::App* compute = app.add_subcommand(
        "compute", "evaluate a measure for a model at a point (t1,t2)");
    compute->footer(kGrammarHelp);
    compute->add_option("--model", ca.model, "model spec")->required();
    compute->add_option("--measure", ca.measure,
                        "ccdfex | brhr | eit | entropy | df | zeta | cond-ccdfex | "
                        "cond-brhr | cond-eit")
        ->capture_default_str();
    compute->add_option("--i", ca.i, "component, 1 or 2")->capture_default_str();
    compute->add_option("--t", ca.t, "evaluation point 't1,t2'")->required();
    compute->add_option("--route", ca.route, "ccdfex route: auto | closed | numeric")
        ->capture_default_str();
    compute->add_option("--lo-override", [&ca](const CLI::results_t& r) {
        ca.lo_override = std::stod(r[0]);
        return true;
    }, "pin the integration lower limit (implies the numeric route)");
    compute->add_option("--kappa", ca.kappa,
                        "prefactor for cond-ccdfex (0.5 default, 1 literal)")
        ->capture_default_str();
    compute->add_option("--c", ca.c, "zeta lower limit")->each([&ca](const std::string&) {
        ca.has_c = true;
    });
    compute->add_option("--d", ca.d, "zeta upper limit")->each([&ca](const std::string&) {
        ca.has_d = true;
    });
    add_quad_flags(compute, ca.quad);

    EstimateArgs ea;
    CLI::App* estimate =
        app.add_subcommand("estimate", "plug-in estimates from a two-column CSV");
    estimate->footer(kGrammarHelp);
    estimate->add_option("--data", ea.data, "paired CSV file")->required();
    estimate->add_option("--estimator", ea.estimator, "empirical | kernel | both")
        ->capture_default_str();
    estimate->add_option("--i", ea.i, "component, 1 or 2")->capture_default_str();
    estimate->add_option("--t", ea.t, "evaluation point 't1,t2'")->required();
    // long-only help here so the short -h slot is free for the bandwidth
    estimate->set_help_flag("--help", "print help and exit");
    estimate->add_option("--h", ea.h, "kernel bandwidth (default: Scott rule)");
    add_quad_flags(estimate, ea.quad);

    SimulateArgs sa;
    CLI::App* simulate =
        app.add_subcommand("simulate", "bias/MSE study of the estimators");
    simulate->footer(kGrammarHelp);
    simulate->add_option("--config", sa.config, "study preset (only 'default')")
        ->capture_default_str();
    simulate->add_option("--model", sa.model, "override the study model spec");
    simulate->add_option("--component", sa.component, "component, 1 or 2")
        ->each([&sa](const std::string&) { sa.has_component = true; });
    simulate->add_option("--sizes", sa.sizes, "comma-separated sample sizes");
    simulate->add_option("--reps", sa.reps, "replications per size")
        ->each([&sa](const std::string&) { sa.has_reps = true; });
    simulate->add_option("--points", sa.points,
                         "evaluation pairs 't1,t2;t1,t2;...'");
    simulate->add_option("--seed", sa.seed, "base seed")->each([&sa](const std::string&) {
        sa.has_seed = true;
    });
    simulate->add_option("--truth", [&sa](const CLI::results_t& r) {
        sa.truth = std::stod(r[0]);
        return true;
    }, "override the oracle truth at every point");
    simulate->add_option("--format", sa.format, "csv | json")->capture_default_str();
    simulate->add_option("--out", sa.out, "output file (default stdout)");

    VerifyArgs va;
    CLI::App* verify =
        app.add_subcommand("verify", "check a property on a grid; exit 1 when violated");
    verify->footer(kGrammarHelp);
    verify->add_option("--check", va.check,
                       "eit-bound | entropy-bound | cond-bound | order | proportionality | "
                       "characterization | monotonicity | derivative-identity | "
                       "cond-derivative-identity | zeta")
        ->required();
    verify->add_option("--model", va.model, "model spec")->required();
    verify->add_option("--other", va.other, "lower model for --check order");
    verify->add_option("--grid", va.grid, "'default', 'N1xN2' or 'diag:N'")
        ->capture_default_str();
    verify->add_option("--i", va.i, "component, 1 or 2")->capture_default_str();
    verify->add_option("--tol", va.tol, "check tolerance")->capture_default_str();
    verify->add_option("--k", va.k, "proportionality constant")->capture_default_str();
    verify->add_option("--step", va.step, "finite-difference step for identities")
        ->capture_default_str();
    verify->add_option("--t", va.t, "point for --check zeta");
    verify->add_option("--draws", va.draws, "draws for --check zeta")->capture_default_str();
    verify->add_option("--seed", va.seed, "seed for --check zeta")->capture_default_str();
    verify->add_option("--out", va.out, "verdict file (default stdout)");
    add_quad_flags(verify, va.quad);

    GofArgs ga;
    CLI::App* gof = app.add_subcommand(
        "gof", "exponential fit and Anderson-Darling test per column");
    gof->add_option("--data", ga.data, "paired CSV file")->required();
    gof->add_option("--format", ga.format, "csv | json")->capture_default_str();
    gof->add_option("--out", ga.out, "output file (default stdout)");

    CLI::App* catalog =
        app.add_subcommand("catalog", "list model catalog entries and constraints");

    FigureArgs fa;
    CLI::App* figure = app.add_subcommand(
        "figure", "emit preset illustration grids as CSV");
    figure->footer(kGrammarHelp);
    figure->add_option("--kind", fa.kind,
                       "fig1 (lower-bound margin) | fig2 (entropy-bound margin) | "
                       "fig3 (ordering gap) | fig4 (truth/empirical/kernel)")
        ->required();
    figure->add_option("--model", fa.model, "model spec (kind-specific default)");
    figure->add_option("--other", fa.other, "lower model for fig3");
    figure->add_option("--i", fa.i, "component, 1 or 2")->capture_default_str();
    figure->add_option("--points", fa.points, "points along the diagonal")
        ->capture_default_str();
    figure->add_option("--n", fa.n, "sample size for fig4")->capture_default_str();
    figure->add_option("--seed", fa.seed, "seed for fig4")->capture_default_str();
    figure->add_option("--out", fa.out, "output file (default stdout)");
    add_quad_flags(figure, fa.quad);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compute->parsed()) return run_compute(ca);
        if (estimate->parsed()) return run_estimate(ea);
        if (simulate->parsed()) return run_simulate(sa);
        if (verify->parsed()) return run_verify(va);
        if (gof->parsed()) return run_gof(ga);
        if (catalog->parsed()) {
            for (const std::string& line : catalog_summary()) std::cout << line << "\n";
            return 0;
        }
        if (figure->parsed()) return run_figure(fa);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
