#include "ccdfex/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccdfex {
namespace {

void check_component(int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("component index must be 1 or 2");
}

void check_sample(const PairedSample& s) {
    if (s.x1.empty() || s.x1.size() != s.x2.size())
        throw std::invalid_argument("estimator: sample is empty or ragged");
}

} // namespace

double epanechnikov_cdf(double z) {
    if (z <= -1.0) return 0.0;
    if (z >= 1.0) return 1.0;
    return 0.25 * (2.0 + 3.0 * z - z * z * z);
}

double empirical_cdf(const PairedSample& s, double t1, double t2) {
    check_sample(s);
    std::size_t c = 0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s.x1[k] <= t1 && s.x2[k] <= t2) ++c;
    return static_cast<double>(c) / static_cast<double>(s.size());
}

double empirical_failure_extropy(const PairedSample& s, int i, double t1, double t2) {
    check_component(i);
    check_sample(s);
    const auto& xi = (i == 1) ? s.x1 : s.x2;
    const auto& xj = (i == 1) ? s.x2 : s.x1;
    const double ti = (i == 1) ? t1 : t2;
    const double tj = (i == 1) ? t2 : t1;
    const double n = static_cast<double>(s.size());

    // values of component i whose partner clears t_j; the slice
    // x -> Fhat(x, t_j) steps only at these knots
    std::vector<double> v;
    v.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
        if (xj[k] <= tj) v.push_back(xi[k]);
    std::sort(v.begin(), v.end());

    const auto in_corner = std::upper_bound(v.begin(), v.end(), ti) - v.begin();
    const double mass = static_cast<double>(in_corner) / n;
    if (mass <= 0.0)
        throw std::domain_error("empirical failure extropy: no observation below (t1,t2)");

    double integral = 0.0;
    for (std::size_t k = 0; k < v.size() && v[k] < ti; ++k) {
        const double hi = (k + 1 < v.size()) ? std::min(v[k + 1], ti) : ti;
        const double val = static_cast<double>(k + 1) / n;
        integral += val * val * std::max(0.0, hi - v[k]);
    }
    return -0.5 * integral / (mass * mass);
}

double scott_bandwidth(const PairedSample& s) {
    check_sample(s);
    const std::size_t n = s.size();
    if (n < 2)
        throw std::invalid_argument("scott bandwidth: needs at least 2 observations");
    auto sd = [n](const std::vector<double>& x) {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : x) ss += (v - mean) * (v - mean);
        return std::sqrt(ss / static_cast<double>(n - 1));
    };
    return 0.5 * (sd(s.x1) + sd(s.x2)) * std::pow(static_cast<double>(n), -1.0 / 6.0);
}

double kernel_cdf(const PairedSample& s, double t1, double t2, double h) {
    check_sample(s);
    if (!(h > 0.0)) throw std::invalid_argument("kernel df: bandwidth must be positive");
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        acc += epanechnikov_cdf((t1 - s.x1[k]) / h) * epanechnikov_cdf((t2 - s.x2[k]) / h);
    return acc / static_cast<double>(s.size());
}

double kernel_failure_extropy(const PairedSample& s, int i, double t1, double t2,
                              double h, const QuadSpec& q) {
    check_component(i);
    check_sample(s);
    if (!(h > 0.0)) throw std::invalid_argument("kernel estimator: bandwidth must be positive");
    const auto& xi = (i == 1) ? s.x1 : s.x2;
    const auto& xj = (i == 1) ? s.x2 : s.x1;
    const double ti = (i == 1) ? t1 : t2;
    const double tj = (i == 1) ? t2 : t1;
    const double n = static_cast<double>(s.size());

    std::vector<double> w(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
        w[k] = epanechnikov_cdf((tj - xj[k]) / h);

    auto slice = [&](double x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k)
            acc += w[k] * epanechnikov_cdf((x - xi[k]) / h);
        return acc / n;
    };
    const double den = slice(ti);
    if (den <= 0.0)
        throw std::domain_error("kernel failure extropy: no kernel mass below (t1,t2)");

    const double lo = std::min(*std::min_element(xi.begin(), xi.end()) - h, ti);
    auto g = [&](double x) {
        const double r = slice(x) / den;
        return r * r;
    };
    // A bandwidth much narrower than the range turns the integrand into
    // a staircase whose ramps (width 2h) a coarse first panel can step
    // over; cutting the range at the ramp edges keeps the quadrature
    // honest. Each piece is then polynomial, which Simpson handles well.
    std::vector<double> cuts{lo, ti};
    if (2.0 * h < (ti - lo) / 64.0) {
        for (double a : xi)
            for (double e : {a - h, a + h})
                if (e > lo && e < ti) cuts.push_back(e);
    }
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] - cuts[k] < 1e-15) continue;
        acc += integrate_adaptive(g, cuts[k], cuts[k + 1], q);
    }
    return -0.5 * acc;
}

} // namespace ccdfex
