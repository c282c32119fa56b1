// Acceptance gate: one line per criterion, PASS or FAIL, exit code is
// the number of failures. Expects the CLI binary path as argv[1] for
// the determinism criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "support.hpp"

#include "ccdfex/analysis.hpp"
#include "ccdfex/dataio.hpp"
#include "ccdfex/distributions.hpp"
#include "ccdfex/estimators.hpp"
#include "ccdfex/measures.hpp"
#include "ccdfex/rng.hpp"
#include "ccdfex/simulation.hpp"

using namespace ccdfex;

namespace {

int g_failures = 0;
std::string g_cli; // path to the binary, may be empty

using Outcome = std::pair<bool, std::string>;

void criterion(int idx, const std::string& name, const std::function<Outcome()>& fn)
{
    bool ok = false;
    std::string detail;
    try {
        std::tie(ok, detail) = fn();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    std::printf("C%02d %s %s%s%s\n", idx, ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> interior(double lo, double hi, int n)
{
    std::vector<double> v;
    for (int k = 0; k < n; ++k)
        v.push_back(lo + (hi - lo) * (k + 1.0) / (n + 1.0));
    return v;
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- C1
Outcome golden_closed_forms()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const BivariateModel& m :
         {bivariate_uniform(1.0, 1.0), gumbel_uniform(-0.5), gumbel_uniform(-1.5),
          sum_uniform(), bivariate_power(2.0, 2.0, -1.5),
          general_power(2.0, 3.0, 1.5, 2.0, -0.4)}) {
        const SupportRect box = evaluation_box(m);
        for (double a : interior(box.lo1, box.hi1, 5))
            for (double b : interior(box.lo2, box.hi2, 5))
                for (int i : {1, 2})
                    worst = std::max(worst, std::fabs(failure_extropy(m, i, a, b)
                                                      - failure_extropy_numeric(m, i, a, b)));
    }
    // Doubly exponential df: closed form defined with the lower limit
    // pinned at zero.
    const BivariateModel ev = extreme_value();
    QuadSpec q;
    for (double a : interior(0.2, 2.6, 5))
        for (double b : interior(0.2, 2.6, 5)) {
            worst = std::max(worst,
                             std::fabs(failure_extropy_numeric(ev, 1, a, b, q, 0.0)
                                       - extreme_value_closed_ccdfex(1, a, b)));
            worst = std::max(worst,
                             std::fabs(failure_extropy_numeric(ev, 2, a, b, q, 0.0)
                                       - extreme_value_closed_ccdfex(2, a, b)));
        }
    const bool exact = std::fabs(failure_extropy(bivariate_uniform(1.0, 1.0), 1, 0.3, 0.7)
                                 + 0.05) < 1e-15;
    const double secs = elapsed_s(t0);
    const bool ok = worst <= 1e-6 && exact && secs < 10.0;
    return {ok, "max gap " + num(worst) + ", corner exact " + (exact ? "yes" : "no")
                    + ", " + num(secs) + " s"};
}

// ---------------------------------------------------------------- C2
Outcome eit_bound_diagonals()
{
    bool ok = true;
    double worst = 0.0;
    for (const BivariateModel& m : {bivariate_power(2.0, 2.0, -1.5), gumbel_uniform(-1.5)}) {
        const auto diag = diagonal_points(evaluation_box(m), 50);
        for (int i : {1, 2}) {
            const PropertyVerdict v = check_eit_bound(m, i, diag, 1e-9);
            ok = ok && v.holds && v.checked == 50;
            worst = std::max(worst, v.worst_violation);
        }
    }
    return {ok, "worst excess " + num(worst)};
}

// ---------------------------------------------------------------- C3
Outcome entropy_bound_grid()
{
    const BivariateModel g = gumbel_uniform(-0.2);
    const auto grid = default_grid(g);
    bool ok = grid.size() == 49;
    for (int i : {1, 2}) {
        const PropertyVerdict v = check_entropy_bound(g, i, grid, 1e-9);
        ok = ok && v.holds && v.checked == 49;
    }
    return {ok, ""};
}

// ---------------------------------------------------------------- C4
Outcome independence_characterization()
{
    double dev_indep = 0.0;
    for (const BivariateModel& m :
         {product_model(uniform_margin(1.0), power_margin(2.0)),
          bivariate_uniform(2.0, 0.5), extreme_value()}) {
        const CharacterizationReport r =
            check_characterization(m, make_grid(evaluation_box(m), 5, 5));
        dev_indep = std::max(dev_indep, r.max_deviation);
    }
    const BivariateModel dep = gumbel_uniform(-1.0);
    const CharacterizationReport d =
        check_characterization(dep, make_grid(evaluation_box(dep), 5, 5));
    const bool ok = dev_indep <= 1e-8 && d.max_deviation > 1e-3;
    return {ok, "independent " + num(dev_indep) + ", dependent " + num(d.max_deviation)};
}

// ---------------------------------------------------------------- C5
Outcome zeta_moment_representation()
{
    const ZetaCheck a =
        check_zeta_representation(bivariate_uniform(1.0, 1.0), 1, 0.6, 0.6, 100000, 1);
    const ZetaCheck b =
        check_zeta_representation(moran_downton(2.0, 0.5, 0.5), 1, 0.6, 0.6, 100000, 1);
    const bool ok = std::fabs(a.zscore) <= 3.0 && std::fabs(b.zscore) <= 3.0
                    && a.kept > 1000 && b.kept > 1000;
    return {ok, "|z| = " + num(std::fabs(a.zscore)) + " and " + num(std::fabs(b.zscore))};
}

// ---------------------------------------------------------------- C6
Outcome ordering_gap_grid()
{
    const BivariateModel upper = sum_uniform();
    const BivariateModel lower = bivariate_uniform(1.0, 1.0);
    double worst = 1e300;
    bool ok = true;
    for (double a : interior(0.0, 1.0, 9))
        for (double b : interior(0.0, 1.0, 9))
            for (int i : {1, 2}) {
                const double gap = failure_extropy(upper, i, a, b)
                                   - failure_extropy(lower, i, a, b);
                worst = std::min(worst, gap);
                ok = ok && gap >= -1e-12;
            }
    return {ok, "min gap " + num(worst)};
}

// ---------------------------------------------------------------- C7
Outcome power_transform_ordering()
{
    const BivariateModel g = bivariate_uniform(1.0, 1.0);
    const BivariateModel f = power_transform(g, 2.0);
    bool ok = true;
    double worst = 0.0;
    for (double a : interior(0.0, 1.0, 5))
        for (double b : interior(0.0, 1.0, 5)) {
            const double jg = failure_extropy(g, 1, a, b);   // -t1/6
            const double jf = failure_extropy(f, 1, a, b);   // -t1/10
            ok = ok && std::fabs(jg + a / 6.0) < 1e-12;
            worst = std::max(worst, std::fabs(jf + a / 10.0));
            ok = ok && jg < jf - 1e-6; // strict everywhere inside
        }
    ok = ok && worst <= 1e-8;
    return {ok, "power-route gap " + num(worst)};
}

// ---------------------------------------------------------------- C8
Outcome derivative_identities()
{
    double worst = 0.0;
    int checked = 0;
    for (const BivariateModel& m :
         {bivariate_uniform(1.0, 1.0), gumbel_uniform(-0.5), sum_uniform(),
          extreme_value(), bivariate_power(2.0, 2.0, -1.5),
          general_power(2.0, 3.0, 1.5, 2.0, -0.4), moran_downton(2.0, 0.5, 0.5)}) {
        const auto grid = make_grid(evaluation_box(m), 3, 3);
        for (int i : {1, 2}) {
            const IdentityCheck c = check_derivative_identity(m, i, grid, 1e-3);
            worst = std::max(worst, c.max_abs_error);
            checked += c.checked;
        }
    }
    double worst_cond = 0.0;
    for (const BivariateModel& m :
         {bivariate_uniform(1.0, 1.0), gumbel_uniform(-0.5), sum_uniform(),
          bivariate_power(2.0, 2.0, -1.5)}) {
        const auto grid = make_grid(evaluation_box(m), 3, 3);
        for (int i : {1, 2}) {
            const IdentityCheck c = check_cond_derivative_identity(m, i, grid, 1e-3);
            worst_cond = std::max(worst_cond, c.max_abs_error);
            checked += c.checked;
        }
    }
    const bool ok = worst <= 1e-4 && worst_cond <= 1e-4 && checked == 198;
    return {ok, "joint " + num(worst) + ", conditional " + num(worst_cond)};
}

// ---------------------------------------------------------------- C9
Outcome reversed_hazard_recovery()
{
    const BivariateModel m = bivariate_uniform(1.0, 1.0);
    auto j = [&](double t) { return failure_extropy(m, 1, t, 0.7); };
    double worst = 0.0;
    for (double t : interior(0.08, 0.92, 20))
        worst = std::max(worst, std::fabs(recover_reversed_hazard(j, t, 1e-4) - 1.0 / t));
    return {worst <= 1e-4, "max error " + num(worst)};
}

// --------------------------------------------------------------- C10
double dense_riemann(const PairedSample& s, int i, double t1, double t2)
{
    const double den = empirical_cdf(s, t1, t2);
    const double ti = (i == 1) ? t1 : t2;
    const double tj = (i == 1) ? t2 : t1;
    const double step = 1e-6;
    const long long cells = static_cast<long long>(std::floor(ti / step));
    double acc = 0.0;
    for (long long k = 0; k < cells; ++k) {
        const double x = static_cast<double>(k) * step;
        const double f = (i == 1) ? empirical_cdf(s, x, tj) : empirical_cdf(s, tj, x);
        acc += (f / den) * (f / den) * step;
    }
    const double xr = static_cast<double>(cells) * step;
    const double fr = (i == 1) ? empirical_cdf(s, xr, tj) : empirical_cdf(s, tj, xr);
    acc += (fr / den) * (fr / den) * (ti - xr);
    return -0.5 * acc;
}

Outcome empirical_estimator_oracle()
{
    const PairedSample hand = make_paired_sample({1.0, 2.0}, {1.0, 2.0});
    if (empirical_failure_extropy(hand, 1, 2.0, 2.0) != -0.125)
        return {false, "hand case not exact"};

    Rng rng(20240826);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 9.0);
        std::vector<double> a, b;
        for (std::size_t k = 0; k < n; ++k) {
            a.push_back(rng.uniform01());
            b.push_back(rng.uniform01());
        }
        const PairedSample s = make_paired_sample(std::move(a), std::move(b));
        if (empirical_cdf(s, 0.85, 0.9) == 0.0) continue;
        const double exact = empirical_failure_extropy(s, 1, 0.85, 0.9);
        worst = std::max(worst, std::fabs(exact - dense_riemann(s, 1, 0.85, 0.9)));
        ++done;
    }
    return {worst <= 1e-6, "max gap " + num(worst) + " over 100 samples"};
}

// --------------------------------------------------------------- C11
Outcome kernel_degenerate_limit()
{
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(mix_seed(seed, 77));
        std::vector<double> a, b;
        for (int k = 0; k < 8; ++k) {
            a.push_back(rng.uniform01());
            b.push_back(rng.uniform01());
        }
        const PairedSample s = make_paired_sample(std::move(a), std::move(b));
        for (int i : {1, 2}) {
            const double ke = kernel_failure_extropy(s, i, 1.25, 1.33, 1e-6);
            const double em = empirical_failure_extropy(s, i, 1.25, 1.33);
            worst = std::max(worst, std::fabs(ke - em));
        }
    }
    return {worst <= 1e-6, "max gap " + num(worst)};
}

// --------------------------------------------------------------- C12
Outcome default_study()
{
    const auto t0 = std::chrono::steady_clock::now();
    StudyConfig cfg; // correlated exponential defaults
    const StudyReport rep = run_study(cfg);
    const double secs = elapsed_s(t0);

    auto cell = [&](const std::string& est, const GridPoint& p,
                    std::size_t n) -> const StudyRow* {
        for (const StudyRow& r : rep.rows)
            if (r.estimator == est && r.n == n && std::fabs(r.t1 - p.t1) < 1e-12
                && std::fabs(r.t2 - p.t2) < 1e-12)
                return &r;
        return nullptr;
    };

    bool shrinking = true, envelope = true;
    for (const std::string est : {"empirical", "kernel"}) {
        for (const GridPoint& p : cfg.eval_points) {
            const StudyRow* small = cell(est, p, 80);
            const StudyRow* large = cell(est, p, 250);
            if (!small || !large) return {false, "missing study cell"};
            shrinking = shrinking && large->mse < small->mse;
            for (std::size_t n : cfg.sizes) {
                const StudyRow* r = cell(est, p, n);
                envelope = envelope && r && r->mse >= 1e-6 && r->mse <= 1e-2;
            }
        }
    }

    bool kernel_wins = true;
    for (std::size_t n : {std::size_t{150}, std::size_t{200}, std::size_t{250}}) {
        double avg_emp = 0.0, avg_ker = 0.0;
        for (const GridPoint& p : cfg.eval_points) {
            avg_emp += cell("empirical", p, n)->mse;
            avg_ker += cell("kernel", p, n)->mse;
        }
        kernel_wins = kernel_wins && avg_ker <= avg_emp;
    }

    const bool ok = secs < 600.0 && rep.rows.size() == 56 && shrinking && envelope
                    && kernel_wins;
    return {ok, num(secs) + " s; mse shrinks " + (shrinking ? "yes" : "no")
                    + ", envelope " + (envelope ? "yes" : "no") + ", kernel wins "
                    + (kernel_wins ? "yes" : "no")};
}

// --------------------------------------------------------------- C13
Outcome correlated_exponential_sampler()
{
    const PairedSample s = sample(moran_downton(2.0, 0.5, 0.5), 100000, 1);
    const double m1 = testsup::sample_mean(s.x1);
    const double m2 = testsup::sample_mean(s.x2);
    const double corr = testsup::pearson_corr(s.x1, s.x2);
    const bool ok = std::fabs(m1 - 2.0) <= 0.03 && std::fabs(m2 - 0.5) <= 0.01
                    && std::fabs(corr - 0.5) <= 0.02;
    return {ok, "means " + num(m1) + "/" + num(m2) + ", corr " + num(corr)};
}

// --------------------------------------------------------------- C14
Outcome ad_test_calibration()
{
    Rng rng(mix_seed(314159));
    int rejections = 0;
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<double> x;
        for (int k = 0; k < 50; ++k) x.push_back(rng.exponential() / 1.7);
        if (ad_test_exponential(x).p_value < 0.05) ++rejections;
    }
    const double rate = rejections / 500.0;
    return {rate >= 0.02 && rate <= 0.09, "rejection rate " + num(rate)};
}

// --------------------------------------------------------------- C15
Outcome seeded_cli_determinism()
{
    if (g_cli.empty()) return {false, "no CLI path supplied"};
    const std::vector<std::string> cmds = {
        g_cli + " simulate --model 'downton:mean1=2,mean2=0.5,rho=0.5' --sizes 20,40"
                " --reps 10 --points 0.6,0.6 --seed 11",
        g_cli + " figure --kind fig4 --n 80 --seed 5",
        g_cli + " verify --check zeta --model uniform:c1=1,c2=1 --t 0.7,0.7"
                " --draws 5000 --seed 9",
        g_cli + " compute --model uniform:c1=1,c2=1 --measure ccdfex --i 1 --t 0.3,0.7"};
    for (const std::string& c : cmds) {
        const testsup::CmdResult a = testsup::run_cmd(c);
        const testsup::CmdResult b = testsup::run_cmd(c);
        if (a.code != 0 || b.code != 0) return {false, "command failed: " + c};
        if (a.out != b.out) return {false, "outputs differ for: " + c};
        if (a.out.empty()) return {false, "no output from: " + c};
    }
    return {true, num(cmds.size()) + " commands byte-identical"};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc > 1) g_cli = argv[1];

    criterion(1, "closed-form golden suite", golden_closed_forms);
    criterion(2, "inactivity-time lower bound on diagonals", eit_bound_diagonals);
    criterion(3, "entropy upper bound on the 7x7 grid", entropy_bound_grid);
    criterion(4, "independence characterization", independence_characterization);
    criterion(5, "moment representation by monte carlo", zeta_moment_representation);
    criterion(6, "stochastic ordering gap is nonnegative", ordering_gap_grid);
    criterion(7, "squared-df transform ordering", power_transform_ordering);
    criterion(8, "derivative identities", derivative_identities);
    criterion(9, "reversed hazard recovery", reversed_hazard_recovery);
    criterion(10, "empirical plug-in matches dense Riemann", empirical_estimator_oracle);
    criterion(11, "kernel plug-in degenerates to empirical", kernel_degenerate_limit);
    criterion(12, "default bias/MSE study", default_study);
    criterion(13, "correlated exponential sampler moments", correlated_exponential_sampler);
    criterion(14, "goodness-of-fit calibration", ad_test_calibration);
    criterion(15, "seeded commands are byte-identical", seeded_cli_determinism);

    if (g_failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria failed\n", g_failures);
    return g_failures;
}
