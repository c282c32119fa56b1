#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccdfex/distributions.hpp"
#include "ccdfex/measures.hpp"

namespace ccdfex {

struct GridPoint {
    double t1, t2;
};

/// Rectangular grid of n1 x n2 points spanning the [span_lo, span_hi]
/// fractions of the box on each axis.
std::vector<GridPoint> make_grid(const SupportRect& box, int n1, int n2,
                                 double span_lo = 0.10, double span_hi = 0.90);

/// Points on the diagonal of the box over the same fractional span.
std::vector<GridPoint> diagonal_points(const SupportRect& box, int n,
                                       double span_lo = 0.10, double span_hi = 0.90);

/// 7 x 7 grid over the central 10..90% span of the model's evaluation
/// box (the support when bounded, central quantile ranges otherwise).
std::vector<GridPoint> default_grid(const BivariateModel& m);

struct Counterexample {
    double t1, t2;
    double lhs, rhs;
};

struct PropertyVerdict {
    std::string property;
    bool holds = true;
    int checked = 0;
    double tolerance = 0.0;
    /// Largest excess beyond the tolerance; 0 when the property holds.
    double worst_violation = 0.0;
    /// At most 10 offending points.
    std::vector<Counterexample> counterexamples;
};

/// Lower bound through the expected inactivity time:
/// J_i >= -(1/2) mbar_i at every grid point.
PropertyVerdict check_eit_bound(const BivariateModel& m, int i,
                                const std::vector<GridPoint>& grid, double tol,
                                const QuadSpec& q = QuadSpec{});

/// Upper bound through the failure entropy:
/// J_i <= (1/2)(Hbar_i - mbar_i) at every grid point.
PropertyVerdict check_entropy_bound(const BivariateModel& m, int i,
                                    const std::vector<GridPoint>& grid, double tol,
                                    const QuadSpec& q = QuadSpec{});

/// Same lower bound for the conditional measures (kappa = 1/2 family):
/// J*_i >= -(1/2) mbar*_i.
PropertyVerdict check_conditional_bound(const BivariateModel& m, int i,
                                        const std::vector<GridPoint>& grid, double tol,
                                        const QuadSpec& q = QuadSpec{});

/// Pointwise ordering J_i^upper >= J_i^lower for a pair of models whose
/// normalized df slices are ordered.
PropertyVerdict check_extropy_order(const BivariateModel& upper,
                                    const BivariateModel& lower, int i,
                                    const std::vector<GridPoint>& grid, double tol,
                                    const QuadSpec& q = QuadSpec{});

/// Proportional reversed hazards with constant k: J_1 = k J_2 at the
/// supplied points (the relation lives on the ray t1 = k t2).
PropertyVerdict check_proportionality(const BivariateModel& m, double k,
                                      const std::vector<GridPoint>& grid, double tol,
                                      const QuadSpec& q = QuadSpec{});

struct CharacterizationReport {
    /// max over the grid and both components of
    /// |J_i(t1,t2) - J_i^marginal(t_i)|; zero exactly when the joint df
    /// factorizes over the grid.
    double max_deviation = 0.0;
    int checked = 0;
};

CharacterizationReport check_characterization(const BivariateModel& m,
                                              const std::vector<GridPoint>& grid,
                                              const QuadSpec& q = QuadSpec{});

struct MonotonicityCell {
    double t1, t2;
    double by_criterion;
    double by_finite_difference;
};

struct MonotonicityReport {
    int checked = 0;
    int increasing_by_criterion = 0;
    int increasing_by_difference = 0;
    /// True when both routes agree in sign at every point, up to the
    /// tolerance dead band.
    bool consistent = true;
    double tolerance = 0.0;
    std::vector<MonotonicityCell> disagreements;
};

/// Slope of t_j -> J_i(t1, t2): analytically through
/// -2 J h_j - (1/F^2) int F F_j, and by central difference; reports both.
MonotonicityReport check_monotonicity(const BivariateModel& m, int i,
                                      const std::vector<GridPoint>& grid, double tol,
                                      const QuadSpec& q = QuadSpec{});

struct IdentityCheck {
    double max_abs_error = 0.0;
    int checked = 0;
};

/// d J_i / d t_i = -2 J_i hbar_i - 1/2, finite difference with step h
/// against the closed right side.
IdentityCheck check_derivative_identity(const BivariateModel& m, int i,
                                        const std::vector<GridPoint>& grid, double h,
                                        const QuadSpec& q = QuadSpec{});

/// Conditional-measure version of the same identity (kappa = 1/2).
IdentityCheck check_cond_derivative_identity(const BivariateModel& m, int i,
                                             const std::vector<GridPoint>& grid, double h,
                                             const QuadSpec& q = QuadSpec{});

struct ZetaCheck {
    double mc_estimate = 0.0;
    double target = 0.0;
    double std_error = 0.0;
    double zscore = 0.0;
    std::size_t draws = 0;
    std::size_t kept = 0;
};

/// Monte Carlo check of the moment representation
/// E[zeta_i(X_i, t_i; t_j) | X1 < t1, X2 < t2] = -2 F(t1,t2) J_i.
ZetaCheck check_zeta_representation(const BivariateModel& m, int i, double t1, double t2,
                                    std::size_t draws, std::uint64_t seed,
                                    const QuadSpec& q = QuadSpec{});

} // namespace ccdfex
