#include "ccdfex/numerics.hpp"

#include <cmath>
#include <limits>

namespace ccdfex {

void QuadSpec::validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadSpec: abs_tol must be > 0");
    if (!(rel_tol >= 0.0)) throw std::invalid_argument("QuadSpec: rel_tol must be >= 0");
    if (max_depth < 1) throw std::invalid_argument("QuadSpec: max_depth must be >= 1");
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return (h / 6.0) * (fa + 4.0 * fm + fb);
}

// Classic adaptive Simpson with the 1/15 correction term. tol is the
// absolute error budget for the current interval.
double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0)
        throw QuadratureError("integrate_adaptive: depth exhausted without convergence");
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadSpec& spec) {
    spec.validate();
    if (!(a <= b)) throw std::invalid_argument("integrate_adaptive: requires a <= b");
    if (a == b) return 0.0;

    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(whole));
    return adapt(f, a, b, fa, fm, fb, whole, tol, spec.max_depth);
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("central_diff: h must be > 0");
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double exp_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("exp_e1: requires x > 0");
    constexpr double euler_gamma = 0.57721566490153286060651209008240243;
    if (x <= 1.0) {
        // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
        double sum = 0.0;
        double term = 1.0; // x^k / k!
        for (int k = 1; k <= 60; ++k) {
            term *= x / k;
            const double contrib = ((k % 2) ? term : -term) / k;
            sum += contrib;
            if (std::abs(contrib) < 1e-18 * std::abs(sum) + 1e-300) break;
        }
        return -euler_gamma - std::log(x) + sum;
    }
    // Continued fraction E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    // evaluated with the modified Lentz algorithm.
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 300; ++k) {
        const double an = -static_cast<double>(k) * k;
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x) * h;
}

double bessel_i0(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_i0: requires x >= 0");
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 2000; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

double gamma_p_integer(int k, double x) {
    if (k < 0) throw std::domain_error("gamma_p_integer: requires k >= 0");
    if (x <= 0.0) return 0.0;
    // P(k+1, x) = 1 - e^{-x} sum_{j=0}^{k} x^j / j!
    double term = std::exp(-x);
    double tail = term;
    for (int j = 1; j <= k; ++j) {
        term *= x / j;
        tail += term;
    }
    return std::max(0.0, 1.0 - tail);
}

} // namespace ccdfex
