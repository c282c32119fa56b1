#include "ccdfex/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccdfex {
namespace {

void check_component(int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("component index must be 1 or 2");
}

double pick(int i, double a, double b) { return (i == 1) ? a : b; }

double node(double lo, double hi, int k, int n, double span_lo, double span_hi) {
    const double frac =
        (n == 1) ? 0.5 * (span_lo + span_hi)
                 : span_lo + (span_hi - span_lo) * static_cast<double>(k) / (n - 1);
    return lo + frac * (hi - lo);
}

void check_box(const SupportRect& box) {
    if (!(std::isfinite(box.lo1) && std::isfinite(box.hi1) && std::isfinite(box.lo2) &&
          std::isfinite(box.hi2) && box.hi1 > box.lo1 && box.hi2 > box.lo2))
        throw std::invalid_argument("grid: box must be finite with positive extent");
}

void check_span(double span_lo, double span_hi) {
    if (!(0.0 <= span_lo && span_lo <= span_hi && span_hi <= 1.0))
        throw std::invalid_argument("grid: span fractions must satisfy 0 <= lo <= hi <= 1");
}

/// Finite floor for integrals along coordinate i (walks down when the
/// support is unbounded below and the slice has faded out).
double floor_along(const std::function<double(double)>& slice, double lo, double t,
                   double reference) {
    if (std::isfinite(lo)) return lo;
    double cur = std::min(t, 0.0) - 1.0;
    double step = 1.0;
    for (int k = 0; k < 300; ++k) {
        if (slice(cur) <= 1e-9 * reference) break;
        cur -= step;
        step *= 1.5;
    }
    return cur - 2.0;
}

void add_violation(PropertyVerdict& v, const GridPoint& p, double lhs, double rhs,
                   double excess) {
    v.holds = false;
    v.worst_violation = std::max(v.worst_violation, excess);
    if (v.counterexamples.size() < 10) v.counterexamples.push_back({p.t1, p.t2, lhs, rhs});
}

} // namespace

std::vector<GridPoint> make_grid(const SupportRect& box, int n1, int n2,
                                 double span_lo, double span_hi) {
    check_box(box);
    check_span(span_lo, span_hi);
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("grid: sizes must be at least 1");
    std::vector<GridPoint> g;
    g.reserve(static_cast<std::size_t>(n1) * n2);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b)
            g.push_back({node(box.lo1, box.hi1, a, n1, span_lo, span_hi),
                         node(box.lo2, box.hi2, b, n2, span_lo, span_hi)});
    return g;
}

std::vector<GridPoint> diagonal_points(const SupportRect& box, int n,
                                       double span_lo, double span_hi) {
    check_box(box);
    check_span(span_lo, span_hi);
    if (n < 1) throw std::invalid_argument("grid: sizes must be at least 1");
    std::vector<GridPoint> g;
    g.reserve(n);
    for (int k = 0; k < n; ++k)
        g.push_back({node(box.lo1, box.hi1, k, n, span_lo, span_hi),
                     node(box.lo2, box.hi2, k, n, span_lo, span_hi)});
    return g;
}

std::vector<GridPoint> default_grid(const BivariateModel& m) {
    return make_grid(evaluation_box(m), 7, 7);
}

PropertyVerdict check_eit_bound(const BivariateModel& m, int i,
                                const std::vector<GridPoint>& grid, double tol,
                                const QuadSpec& q) {
    check_component(i);
    PropertyVerdict v{"eit-bound", true, 0, tol, 0.0, {}};
    for (const GridPoint& p : grid) {
        const double j = failure_extropy(m, i, p.t1, p.t2, q);
        const double bound = -0.5 * inactivity_time(m, i, p.t1, p.t2, q);
        ++v.checked;
        if (j < bound - tol) add_violation(v, p, j, bound, (bound - tol) - j);
    }
    return v;
}

PropertyVerdict check_entropy_bound(const BivariateModel& m, int i,
                                    const std::vector<GridPoint>& grid, double tol,
                                    const QuadSpec& q) {
    check_component(i);
    PropertyVerdict v{"entropy-bound", true, 0, tol, 0.0, {}};
    for (const GridPoint& p : grid) {
        const double j = failure_extropy(m, i, p.t1, p.t2, q);
        const double bound = 0.5 * (failure_entropy(m, i, p.t1, p.t2, q) -
                                    inactivity_time(m, i, p.t1, p.t2, q));
        ++v.checked;
        if (j > bound + tol) add_violation(v, p, j, bound, j - (bound + tol));
    }
    return v;
}

PropertyVerdict check_conditional_bound(const BivariateModel& m, int i,
                                        const std::vector<GridPoint>& grid, double tol,
                                        const QuadSpec& q) {
    check_component(i);
    PropertyVerdict v{"conditional-bound", true, 0, tol, 0.0, {}};
    for (const GridPoint& p : grid) {
        const double j = cond_failure_extropy(m, i, p.t1, p.t2, q, 0.5);
        const double bound = -0.5 * cond_inactivity_time(m, i, p.t1, p.t2, q);
        ++v.checked;
        if (j < bound - tol) add_violation(v, p, j, bound, (bound - tol) - j);
    }
    return v;
}

PropertyVerdict check_extropy_order(const BivariateModel& upper,
                                    const BivariateModel& lower, int i,
                                    const std::vector<GridPoint>& grid, double tol,
                                    const QuadSpec& q) {
    check_component(i);
    PropertyVerdict v{"extropy-order", true, 0, tol, 0.0, {}};
    for (const GridPoint& p : grid) {
        const double ju = failure_extropy(upper, i, p.t1, p.t2, q);
        const double jl = failure_extropy(lower, i, p.t1, p.t2, q);
        ++v.checked;
        if (ju < jl - tol) add_violation(v, p, ju, jl, (jl - tol) - ju);
    }
    return v;
}

PropertyVerdict check_proportionality(const BivariateModel& m, double k,
                                      const std::vector<GridPoint>& grid, double tol,
                                      const QuadSpec& q) {
    if (!(std::isfinite(k) && k > 0.0))
        throw std::invalid_argument("proportionality: requires k > 0");
    PropertyVerdict v{"proportionality", true, 0, tol, 0.0, {}};
    for (const GridPoint& p : grid) {
        const double j1 = failure_extropy(m, 1, p.t1, p.t2, q);
        const double j2 = failure_extropy(m, 2, p.t1, p.t2, q);
        ++v.checked;
        const double excess = std::abs(j1 - k * j2) - tol;
        if (excess > 0.0) add_violation(v, p, j1, k * j2, excess);
    }
    return v;
}

CharacterizationReport check_characterization(const BivariateModel& m,
                                              const std::vector<GridPoint>& grid,
                                              const QuadSpec& q) {
    CharacterizationReport rep;
    for (const GridPoint& p : grid) {
        for (int i = 1; i <= 2; ++i) {
            const double ti = pick(i, p.t1, p.t2);
            const double joint = failure_extropy(m, i, p.t1, p.t2, q);
            auto margin = [&](double x) { return marginal_df(m, i, x); };
            const double lo = floor_along(margin, pick(i, m.support.lo1, m.support.lo2),
                                          ti, margin(ti));
            const double solo = univariate_failure_extropy(margin, lo, ti, q);
            rep.max_deviation = std::max(rep.max_deviation, std::abs(joint - solo));
            ++rep.checked;
        }
    }
    return rep;
}

MonotonicityReport check_monotonicity(const BivariateModel& m, int i,
                                      const std::vector<GridPoint>& grid, double tol,
                                      const QuadSpec& q) {
    check_component(i);
    const int j = 3 - i;
    MonotonicityReport rep;
    rep.tolerance = tol;
    const SupportRect box = evaluation_box(m);
    const double span_j = pick(j, box.hi1 - box.lo1, box.hi2 - box.lo2);
    const double hstep = 1e-4 * span_j;
    for (const GridPoint& p : grid) {
        const double den = m.cdf(p.t1, p.t2);
        const double jval = failure_extropy(m, i, p.t1, p.t2, q);
        const double hbar_j = reversed_hazard(m, j, p.t1, p.t2);
        const double ti = pick(i, p.t1, p.t2);
        const double tj = pick(i, p.t2, p.t1);
        auto cross = [&](double x) {
            // F(x, .) times the t_j-partial, both on the coordinate-i slice
            if (i == 1)
                return m.cdf(x, p.t2) * df_partial(m, 2, x, p.t2);
            return m.cdf(p.t1, x) * df_partial(m, 1, p.t1, x);
        };
        auto slice = [&](double x) { return (i == 1) ? m.cdf(x, p.t2) : m.cdf(p.t1, x); };
        const double lo =
            floor_along(slice, pick(i, m.support.lo1, m.support.lo2), ti, den);
        const double by_crit = -2.0 * jval * hbar_j -
                               integrate_adaptive(cross, lo, ti, q) / (den * den);
        auto j_of = [&](double t) {
            return (i == 1) ? failure_extropy(m, i, p.t1, t, q)
                            : failure_extropy(m, i, t, p.t2, q);
        };
        const double by_diff = central_diff(j_of, tj, hstep);
        ++rep.checked;
        if (by_crit >= -tol) ++rep.increasing_by_criterion;
        if (by_diff >= -tol) ++rep.increasing_by_difference;
        const bool dead = std::abs(by_crit) <= tol || std::abs(by_diff) <= tol;
        if (!dead && (by_crit > 0.0) != (by_diff > 0.0)) {
            rep.consistent = false;
            if (rep.disagreements.size() < 10)
                rep.disagreements.push_back({p.t1, p.t2, by_crit, by_diff});
        }
    }
    return rep;
}

IdentityCheck check_derivative_identity(const BivariateModel& m, int i,
                                        const std::vector<GridPoint>& grid, double h,
                                        const QuadSpec& q) {
    check_component(i);
    if (!(h > 0.0)) throw std::invalid_argument("identity check: step must be positive");
    IdentityCheck rep;
    for (const GridPoint& p : grid) {
        auto j_of = [&](double t) {
            return (i == 1) ? failure_extropy(m, i, t, p.t2, q)
                            : failure_extropy(m, i, p.t1, t, q);
        };
        const double lhs = central_diff(j_of, pick(i, p.t1, p.t2), h);
        const double rhs = -2.0 * failure_extropy(m, i, p.t1, p.t2, q) *
                               reversed_hazard(m, i, p.t1, p.t2) -
                           0.5;
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(lhs - rhs));
        ++rep.checked;
    }
    return rep;
}

IdentityCheck check_cond_derivative_identity(const BivariateModel& m, int i,
                                             const std::vector<GridPoint>& grid, double h,
                                             const QuadSpec& q) {
    check_component(i);
    if (!(h > 0.0)) throw std::invalid_argument("identity check: step must be positive");
    IdentityCheck rep;
    for (const GridPoint& p : grid) {
        auto j_of = [&](double t) {
            return (i == 1) ? cond_failure_extropy(m, i, t, p.t2, q, 0.5)
                            : cond_failure_extropy(m, i, p.t1, t, q, 0.5);
        };
        const double lhs = central_diff(j_of, pick(i, p.t1, p.t2), h);
        const double rhs = -2.0 * cond_failure_extropy(m, i, p.t1, p.t2, q, 0.5) *
                               cond_reversed_hazard(m, i, p.t1, p.t2) -
                           0.5;
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(lhs - rhs));
        ++rep.checked;
    }
    return rep;
}

ZetaCheck check_zeta_representation(const BivariateModel& m, int i, double t1, double t2,
                                    std::size_t draws, std::uint64_t seed,
                                    const QuadSpec& q) {
    check_component(i);
    if (draws < 2) throw std::invalid_argument("zeta check: needs at least 2 draws");
    const PairedSample s = sample(m, draws, seed);
    const double ti = pick(i, t1, t2);
    const double tj = pick(i, t2, t1);
    double sum = 0.0, sumsq = 0.0;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < draws; ++k) {
        if (!(s.x1[k] < t1 && s.x2[k] < t2)) continue;
        const double xi = pick(i, s.x1[k], s.x2[k]);
        const double z = zeta_integral(m, i, xi, ti, tj, q);
        sum += z;
        sumsq += z * z;
        ++kept;
    }
    if (kept < 2)
        throw std::runtime_error("zeta check: fewer than 2 draws landed below (t1,t2)");
    ZetaCheck rep;
    rep.draws = draws;
    rep.kept = kept;
    rep.mc_estimate = sum / static_cast<double>(kept);
    const double var =
        (sumsq - sum * sum / static_cast<double>(kept)) / static_cast<double>(kept - 1);
    rep.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(kept));
    rep.target = -2.0 * m.cdf(t1, t2) * failure_extropy(m, i, t1, t2, q);
    rep.zscore = (rep.std_error > 0.0) ? (rep.mc_estimate - rep.target) / rep.std_error : 0.0;
    return rep;
}

} // namespace ccdfex
