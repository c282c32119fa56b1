#include "ccdfex/simulation.hpp"

#include <cmath>
#include <stdexcept>

#include "ccdfex/estimators.hpp"
#include "ccdfex/measures.hpp"
#include "ccdfex/rng.hpp"

namespace ccdfex {
namespace {

struct CellAcc {
    std::size_t kept = 0;
    std::size_t excluded = 0;
    double sum_err = 0.0;
    double sum_sq = 0.0;
};

} // namespace

double oracle_truth(const StudyConfig& cfg, const GridPoint& p) {
    if (cfg.truth_override) return *cfg.truth_override;
    return failure_extropy(cfg.model, cfg.component, p.t1, p.t2, cfg.quad);
}

StudyReport run_study(const StudyConfig& cfg) {
    if (cfg.component != 1 && cfg.component != 2)
        throw std::invalid_argument("study: component must be 1 or 2");
    if (cfg.sizes.empty() || cfg.eval_points.empty() || cfg.replications == 0)
        throw std::invalid_argument("study: sizes, points and replications must be nonempty");
    for (std::size_t n : cfg.sizes)
        if (n < 2) throw std::invalid_argument("study: sample sizes must be at least 2");
    if (!cfg.model.has_sampler())
        throw std::invalid_argument("study: model '" + cfg.model.name + "' has no sampler");

    std::vector<double> truth(cfg.eval_points.size());
    for (std::size_t pi = 0; pi < cfg.eval_points.size(); ++pi)
        truth[pi] = oracle_truth(cfg, cfg.eval_points[pi]);

    const std::size_t np = cfg.eval_points.size();
    const std::size_t ns = cfg.sizes.size();
    // index: [estimator][size][point], estimator 0 = empirical, 1 = kernel
    std::vector<CellAcc> cells(2 * ns * np);
    auto cell = [&](int est, std::size_t si, std::size_t pi) -> CellAcc& {
        return cells[(static_cast<std::size_t>(est) * ns + si) * np + pi];
    };

    for (std::size_t si = 0; si < ns; ++si) {
        const std::size_t n = cfg.sizes[si];
        for (std::size_t r = 0; r < cfg.replications; ++r) {
            const PairedSample s = sample(cfg.model, n, mix_seed(cfg.seed, si, r));
            const double h = scott_bandwidth(s);
            for (std::size_t pi = 0; pi < np; ++pi) {
                const GridPoint& p = cfg.eval_points[pi];
                try {
                    const double e =
                        empirical_failure_extropy(s, cfg.component, p.t1, p.t2);
                    CellAcc& c = cell(0, si, pi);
                    ++c.kept;
                    c.sum_err += e - truth[pi];
                    c.sum_sq += (e - truth[pi]) * (e - truth[pi]);
                } catch (const std::domain_error&) {
                    ++cell(0, si, pi).excluded;
                }
                try {
                    const double k =
                        kernel_failure_extropy(s, cfg.component, p.t1, p.t2, h, cfg.quad);
                    CellAcc& c = cell(1, si, pi);
                    ++c.kept;
                    c.sum_err += k - truth[pi];
                    c.sum_sq += (k - truth[pi]) * (k - truth[pi]);
                } catch (const std::domain_error&) {
                    ++cell(1, si, pi).excluded;
                }
            }
        }
    }

    StudyReport rep;
    rep.model_name = cfg.model.name;
    rep.component = cfg.component;
    rep.replications = cfg.replications;
    rep.seed = cfg.seed;
    static const char* kNames[2] = {"empirical", "kernel"};
    for (int est = 0; est < 2; ++est)
        for (std::size_t pi = 0; pi < np; ++pi)
            for (std::size_t si = 0; si < ns; ++si) {
                const CellAcc& c = cell(est, si, pi);
                StudyRow row;
                row.estimator = kNames[est];
                row.t1 = cfg.eval_points[pi].t1;
                row.t2 = cfg.eval_points[pi].t2;
                row.n = cfg.sizes[si];
                row.truth = truth[pi];
                row.excluded = c.excluded;
                if (c.kept > 0) {
                    row.bias = c.sum_err / static_cast<double>(c.kept);
                    row.mse = c.sum_sq / static_cast<double>(c.kept);
                } else {
                    row.bias = std::nan("");
                    row.mse = std::nan("");
                }
                rep.rows.push_back(row);
            }
    return rep;
}

std::vector<StudyRow> flagged_rows(const StudyReport& rep, double threshold) {
    std::vector<StudyRow> out;
    if (rep.replications == 0) return out;
    for (const StudyRow& r : rep.rows)
        if (static_cast<double>(r.excluded) >
            threshold * static_cast<double>(rep.replications))
            out.push_back(r);
    return out;
}

} // namespace ccdfex
