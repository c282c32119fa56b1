#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ccdfex {

/// Axis-aligned support rectangle; infinite endpoints are allowed.
struct SupportRect {
    double lo1, hi1, lo2, hi2;
};

/// A bivariate sample stored component-wise.
struct PairedSample {
    std::vector<double> x1;
    std::vector<double> x2;

    std::size_t size() const { return x1.size(); }
};

/// Throws std::invalid_argument on size mismatch, empty data, or
/// non-finite coordinates.
PairedSample make_paired_sample(std::vector<double> x1, std::vector<double> x2);

/// A univariate distribution function on [lo, hi], used as a factor of
/// product models. pdf and quantile are optional.
struct UnivariateDf {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> df;
    std::function<double(double)> pdf;
    std::function<double(double)> quantile;

    /// df clamped to the support: 0 below lo, raw value up to hi, 1 above.
    double cdf(double t) const;
};

UnivariateDf uniform_margin(double c);
UnivariateDf exponential_margin(double rate);
UnivariateDf power_margin(double a); // F(t) = t^a on [0, 1]
UnivariateDf gumbel_margin();        // F(t) = exp(-exp(-t))

/// A bivariate distribution given through its joint distribution
/// function. df_raw is the joint df evaluated inside the support; the
/// remaining callables are optional analytic shortcuts. Anything left
/// empty is recovered numerically by the free helpers below.
struct BivariateModel {
    std::string name;
    SupportRect support{0.0, 1.0, 0.0, 1.0};

    /// Joint df on the (closed) support rectangle.
    std::function<double(double, double)> df_raw;
    /// Joint density.
    std::function<double(double, double)> pdf;
    /// d df / d t_i, i in {1, 2}.
    std::function<double(int, double, double)> df_partial;
    /// Marginal df / density of component i.
    std::function<double(int, double)> marginal_df;
    std::function<double(int, double)> marginal_pdf;
    /// Conditional df of X_i given X_j = t_j (density-weighted),
    /// i.e. (d df / d t_j)(x_i, t_j) / f_j(t_j) as a function of x_i.
    std::function<double(int, double, double)> conditional;
    /// Deterministic sampler.
    std::function<PairedSample(std::size_t, std::uint64_t)> sampler;
    /// Closed-form conditional dynamic cumulative failure extropy of
    /// component i at (t1, t2), when one is known.
    std::function<double(int, double, double)> closed_ccdfex;

    /// Joint df clamped to [0, 1] and to the support rectangle.
    double cdf(double t1, double t2) const;

    bool has_pdf() const { return static_cast<bool>(pdf); }
    bool has_sampler() const { return static_cast<bool>(sampler); }
    bool has_closed_ccdfex() const { return static_cast<bool>(closed_ccdfex); }
};

// --- catalog ---------------------------------------------------------

/// F(t1,t2) = t1 t2 exp(theta ln t1 ln t2) on (0,1)^2, theta <= 0.
BivariateModel gumbel_uniform(double theta);

/// df of (X, Y) with joint density x + y on the unit square.
BivariateModel sum_uniform();

/// F(t1,t2) = exp(-exp(-t1) - exp(-t2)) on R^2 (independent Gumbel
/// margins).
BivariateModel extreme_value();

/// Independent uniforms on [0, c1] x [0, c2], c1, c2 > 0.
BivariateModel bivariate_uniform(double c1, double c2);

/// F(t1,t2) = t1^(2m-1) t2^(2n-1) exp(theta ln t1 ln t2) on (0,1)^2;
/// m, n > 0, theta < 0.
BivariateModel bivariate_power(double m, double n, double theta);

/// F(t1,t2) = (t1/b1)^c1 (t2/b2)^c2 exp(theta ln(t1/b1) ln(t2/b2)) on
/// (0,b1) x (0,b2); b_i, c_i > 0, theta <= 0.
BivariateModel general_power(double b1, double b2, double c1, double c2, double theta);

/// Correlated exponential pair with the modified Bessel density; means
/// mean1, mean2 > 0 and correlation rho in [0, 1).
BivariateModel moran_downton(double mean1, double mean2, double rho);

/// Closed form for the extreme-value model's measure taken with the
/// integration lower limit pinned at 0 instead of the support bound:
/// (1/2) e^(2 e^(-t_i)) [E1(2) - E1(2 e^(-t_i))], valid for t_i > 0.
double extreme_value_closed_ccdfex(int i, double t1, double t2);

// --- combinators -----------------------------------------------------

/// Independent product of two univariate distribution functions.
BivariateModel product_model(const UnivariateDf& m1, const UnivariateDf& m2);

/// Distribution of (mu1 X1 + eta1, mu2 X2 + eta2), mu_i > 0.
BivariateModel linear_transform(const BivariateModel& base,
                                double mu1, double mu2,
                                double eta1, double eta2);

/// F_base raised to a constant power theta > 0.
BivariateModel power_transform(const BivariateModel& base, double theta);

/// F_base raised to a positive exponent that may vary with (t1, t2).
/// The result is validated to be nondecreasing on a grid; throws
/// std::invalid_argument when it is not a distribution function.
BivariateModel power_transform(const BivariateModel& base,
                               const std::function<double(double, double)>& exponent,
                               const std::string& label = "powertransform");

// --- generic accessors (analytic shortcut when present, numeric
// fallback otherwise) --------------------------------------------------

double joint_pdf(const BivariateModel& m, double x1, double x2);
double df_partial(const BivariateModel& m, int i, double t1, double t2);
double marginal_df(const BivariateModel& m, int i, double t);
double marginal_pdf(const BivariateModel& m, int i, double t);

/// Conditional df of X_i given X_j = t_j evaluated at x_i; throws
/// std::domain_error when the conditioning density is below 1e-12.
double conditional_df(const BivariateModel& m, int i, double x_i, double t_j);

/// Draws n pairs; throws std::logic_error when the model has no sampler.
PairedSample sample(const BivariateModel& m, std::size_t n, std::uint64_t seed);

/// A finite box inside the support suitable for grid checks: the
/// support itself when bounded, otherwise central quantile ranges.
SupportRect evaluation_box(const BivariateModel& m);

// --- model-spec grammar ----------------------------------------------

/// Parses "name:key=value,key=value". Nested models appear in
/// parentheses, e.g. "product:m1=exp(rate=1),m2=power(a=2)" or
/// "linear:base=(uniform:c1=1,c2=1),mu1=2,eta1=1".
/// Throws std::invalid_argument with a message naming the offending
/// token on malformed input.
BivariateModel parse_model_spec(const std::string& spec);

/// One line per catalog entry: name, parameter list, constraints.
std::vector<std::string> catalog_summary();

} // namespace ccdfex
