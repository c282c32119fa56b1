#pragma once

#include <functional>
#include <stdexcept>

namespace ccdfex {

/// Tolerances and recursion cap for adaptive quadrature.
struct QuadSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 50;

    void validate() const;
};

/// Thrown when an adaptive integration exhausts its depth budget
/// before reaching the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive Simpson integration of f over [a, b].
/// Returns 0 exactly when a == b. Throws QuadratureError on
/// depth exhaustion.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadSpec& spec = QuadSpec{});

/// Symmetric difference quotient (f(x+h) - f(x-h)) / (2h).
double central_diff(const std::function<double(double)>& f, double x, double h);

/// Exponential integral E1(x) = \int_x^inf e^{-u}/u du, x > 0.
/// Series for x <= 1, continued fraction for x > 1.
double exp_e1(double x);

/// Modified Bessel function I0(x) = sum_k (x/2)^{2k} / (k!)^2, x >= 0.
double bessel_i0(double x);

/// Regularized lower incomplete gamma P(k+1, x) for integer k >= 0,
/// i.e. the DF of a Gamma(k+1, 1) variate. Used by the correlated
/// exponential catalog entry.
double gamma_p_integer(int k, double x);

} // namespace ccdfex
