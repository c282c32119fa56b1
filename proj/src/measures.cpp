#include "ccdfex/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccdfex {
namespace {

void check_component(int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("component index must be 1 or 2");
}

double pick(int i, double a, double b) { return (i == 1) ? a : b; }

/// Lower integration limit along coordinate i. Finite support floors
/// are used as-is; on an unbounded floor we walk down until the slice
/// df is negligible against the reference mass.
double truncated_floor(const std::function<double(double)>& slice, double lo,
                       double t_i, double reference) {
    if (std::isfinite(lo)) return lo;
    double cur = std::min(t_i, 0.0) - 1.0;
    double step = 1.0;
    for (int k = 0; k < 300; ++k) {
        if (slice(cur) <= 1e-9 * reference) break;
        cur -= step;
        step *= 1.5;
    }
    return cur - 2.0;
}

} // namespace

double failure_extropy_numeric(const BivariateModel& m, int i, double t1, double t2,
                               const QuadSpec& q, std::optional<double> lo_override) {
    check_component(i);
    const double den = m.cdf(t1, t2);
    if (den <= 0.0)
        throw std::domain_error("failure extropy: df mass at (t1,t2) is zero");
    const double ti = pick(i, t1, t2);
    auto slice = [&](double x) { return (i == 1) ? m.cdf(x, t2) : m.cdf(t1, x); };
    const double lo = lo_override
                          ? *lo_override
                          : truncated_floor(slice, pick(i, m.support.lo1, m.support.lo2),
                                            ti, den);
    if (!(lo <= ti))
        throw std::invalid_argument("failure extropy: lower limit exceeds t_i");
    auto g = [&](double x) {
        const double r = slice(x) / den;
        return r * r;
    };
    return -0.5 * integrate_adaptive(g, lo, ti, q);
}

double failure_extropy(const BivariateModel& m, int i, double t1, double t2,
                       const QuadSpec& q) {
    check_component(i);
    if (m.closed_ccdfex) {
        const double den = m.cdf(t1, t2);
        if (den <= 0.0)
            throw std::domain_error("failure extropy: df mass at (t1,t2) is zero");
        return m.closed_ccdfex(i, t1, t2);
    }
    return failure_extropy_numeric(m, i, t1, t2, q);
}

double univariate_failure_extropy(const std::function<double(double)>& df,
                                  double lo, double t, const QuadSpec& q) {
    if (!std::isfinite(lo))
        throw std::invalid_argument("univariate failure extropy: lower limit must be finite");
    const double den = df(t);
    if (den <= 0.0)
        throw std::domain_error("univariate failure extropy: df mass at t is zero");
    auto g = [&](double x) {
        const double r = df(x) / den;
        return r * r;
    };
    return -0.5 * integrate_adaptive(g, lo, t, q);
}

double reversed_hazard(const BivariateModel& m, int i, double t1, double t2) {
    check_component(i);
    const double den = m.cdf(t1, t2);
    if (den <= 0.0)
        throw std::domain_error("reversed hazard: df mass at (t1,t2) is zero");
    return df_partial(m, i, t1, t2) / den;
}

double zeta_integral(const BivariateModel& m, int i, double c, double d,
                     double t_other, const QuadSpec& q) {
    check_component(i);
    if (!(c <= d))
        throw std::invalid_argument("zeta integral: requires c <= d");
    auto slice = [&](double x) { return (i == 1) ? m.cdf(x, t_other) : m.cdf(t_other, x); };
    return integrate_adaptive(slice, c, d, q);
}

double inactivity_time(const BivariateModel& m, int i, double t1, double t2,
                       const QuadSpec& q) {
    check_component(i);
    const double den = m.cdf(t1, t2);
    if (den <= 0.0)
        throw std::domain_error("inactivity time: df mass at (t1,t2) is zero");
    const double ti = pick(i, t1, t2);
    auto slice = [&](double x) { return (i == 1) ? m.cdf(x, t2) : m.cdf(t1, x); };
    const double lo =
        truncated_floor(slice, pick(i, m.support.lo1, m.support.lo2), ti, den);
    return integrate_adaptive(slice, lo, ti, q) / den;
}

double failure_entropy(const BivariateModel& m, int i, double t1, double t2,
                       const QuadSpec& q) {
    check_component(i);
    const double den = m.cdf(t1, t2);
    if (den <= 0.0)
        throw std::domain_error("failure entropy: df mass at (t1,t2) is zero");
    const double ti = pick(i, t1, t2);
    auto slice = [&](double x) { return (i == 1) ? m.cdf(x, t2) : m.cdf(t1, x); };
    const double lo =
        truncated_floor(slice, pick(i, m.support.lo1, m.support.lo2), ti, den);
    auto g = [&](double x) {
        const double r = slice(x) / den;
        return (r <= 0.0) ? 0.0 : r * std::log(r);
    };
    return -integrate_adaptive(g, lo, ti, q);
}

double cond_failure_extropy(const BivariateModel& m, int i, double t1, double t2,
                            const QuadSpec& q, double kappa) {
    check_component(i);
    if (!(kappa > 0.0))
        throw std::invalid_argument("conditional failure extropy: kappa must be positive");
    const double ti = pick(i, t1, t2);
    const double tj = pick(i, t2, t1);
    const double den = conditional_df(m, i, ti, tj);
    if (den <= 0.0)
        throw std::domain_error("conditional failure extropy: conditional df mass at t_i is zero");
    auto slice = [&](double x) { return conditional_df(m, i, x, tj); };
    const double lo =
        truncated_floor(slice, pick(i, m.support.lo1, m.support.lo2), ti, den);
    auto g = [&](double x) {
        const double r = slice(x) / den;
        return r * r;
    };
    return -kappa * integrate_adaptive(g, lo, ti, q);
}

double cond_reversed_hazard(const BivariateModel& m, int i, double t1, double t2) {
    check_component(i);
    const double ti = pick(i, t1, t2);
    const double tj = pick(i, t2, t1);
    const double den = conditional_df(m, i, ti, tj);
    if (den <= 0.0)
        throw std::domain_error("conditional reversed hazard: conditional df mass at t_i is zero");
    const SupportRect box = evaluation_box(m);
    const double h = 1e-6 * std::max(pick(i, box.hi1 - box.lo1, box.hi2 - box.lo2), 1e-3);
    auto f = [&](double x) { return conditional_df(m, i, x, tj); };
    return central_diff(f, ti, h) / den;
}

double cond_inactivity_time(const BivariateModel& m, int i, double t1, double t2,
                            const QuadSpec& q) {
    check_component(i);
    const double ti = pick(i, t1, t2);
    const double tj = pick(i, t2, t1);
    const double den = conditional_df(m, i, ti, tj);
    if (den <= 0.0)
        throw std::domain_error("conditional inactivity time: conditional df mass at t_i is zero");
    auto slice = [&](double x) { return conditional_df(m, i, x, tj); };
    const double lo =
        truncated_floor(slice, pick(i, m.support.lo1, m.support.lo2), ti, den);
    return integrate_adaptive(slice, lo, ti, q) / den;
}

double recover_reversed_hazard(const std::function<double(double)>& j_of_t,
                               double t, double h_diff) {
    const double j = j_of_t(t);
    if (j == 0.0)
        throw std::domain_error("reversed hazard recovery: J(t) is zero");
    const double jp = central_diff(j_of_t, t, h_diff);
    return -(jp + 0.5) / (2.0 * j);
}

} // namespace ccdfex
