#pragma once

#include <functional>
#include <optional>

#include "ccdfex/distributions.hpp"
#include "ccdfex/numerics.hpp"

namespace ccdfex {

/// Conditional dynamic cumulative failure extropy of component i at
/// (t1, t2): -(1/2) * integral from the support floor to t_i of
/// (F(x, t_j) / F(t1, t2))^2 dx, the integration running in the i-th
/// coordinate. Uses the model's closed form when available, otherwise
/// quadrature. Throws std::domain_error when F(t1, t2) = 0.
double failure_extropy(const BivariateModel& m, int i, double t1, double t2,
                       const QuadSpec& q = QuadSpec{});

/// Quadrature evaluation of the same integral; never consults the
/// model's closed form. On an unbounded-below support the lower limit
/// is truncated where the integrand is negligible; lo_override pins it
/// explicitly instead.
double failure_extropy_numeric(const BivariateModel& m, int i, double t1, double t2,
                               const QuadSpec& q = QuadSpec{},
                               std::optional<double> lo_override = std::nullopt);

/// Univariate analogue for a marginal df: -(1/2) * int_lo^t (G(x)/G(t))^2 dx.
double univariate_failure_extropy(const std::function<double(double)>& df,
                                  double lo, double t,
                                  const QuadSpec& q = QuadSpec{});

/// Bivariate reversed hazard component: (d/dt_i) log F(t1, t2).
double reversed_hazard(const BivariateModel& m, int i, double t1, double t2);

/// Expected inactivity time of component i: (1/F) * int_lo^{t_i} F(x, t_j) dx.
double inactivity_time(const BivariateModel& m, int i, double t1, double t2,
                       const QuadSpec& q = QuadSpec{});

/// Partial df mass: int_c^d F(x, t_other) dx along coordinate i.
double zeta_integral(const BivariateModel& m, int i, double c, double d,
                     double t_other, const QuadSpec& q = QuadSpec{});

/// Dynamic cumulative failure entropy of component i:
/// -int_lo^{t_i} (F/Ft) log(F/Ft) dx with Ft = F(t1, t2).
double failure_entropy(const BivariateModel& m, int i, double t1, double t2,
                       const QuadSpec& q = QuadSpec{});

/// Measures for (X_i | X_i < t_i, X_j = t_j), built on the
/// density-weighted conditional df. kappa is the prefactor of the
/// extropy integral; 1/2 keeps the independence reduction and the
/// derivative identity, 1 is the literal alternative convention.
double cond_failure_extropy(const BivariateModel& m, int i, double t1, double t2,
                            const QuadSpec& q = QuadSpec{}, double kappa = 0.5);
double cond_reversed_hazard(const BivariateModel& m, int i, double t1, double t2);
double cond_inactivity_time(const BivariateModel& m, int i, double t1, double t2,
                            const QuadSpec& q = QuadSpec{});

/// Reads the reversed hazard back from a curve t -> J(t) through
/// h = -(J'(t) + 1/2) / (2 J(t)); J' by central difference with step h_diff.
double recover_reversed_hazard(const std::function<double(double)>& j_of_t,
                               double t, double h_diff);

} // namespace ccdfex
