#pragma once

#include "ccdfex/distributions.hpp"
#include "ccdfex/numerics.hpp"

namespace ccdfex {

/// Integrated Epanechnikov kernel: 0 below z = -1, 1 above z = 1,
/// (2 + 3z - z^3)/4 between.
double epanechnikov_cdf(double z);

/// Joint empirical df at (t1, t2).
double empirical_cdf(const PairedSample& s, double t1, double t2);

/// Plug-in estimate of the component-i failure extropy from the
/// empirical df. The integral is the exact knot sum over the sorted
/// admissible values, no discretization. Throws std::domain_error when
/// no observation falls in the corner (t1, t2).
double empirical_failure_extropy(const PairedSample& s, int i, double t1, double t2);

/// Bandwidth 0.5 (sd1 + sd2) n^(-1/6); needs n >= 2.
double scott_bandwidth(const PairedSample& s);

/// Kernel-smoothed joint df with a common bandwidth h > 0.
double kernel_cdf(const PairedSample& s, double t1, double t2, double h);

/// Plug-in estimate using the kernel-smoothed df; the integral runs by
/// quadrature from the lowest point with kernel mass up to t_i.
double kernel_failure_extropy(const PairedSample& s, int i, double t1, double t2,
                              double h, const QuadSpec& q = QuadSpec{});

} // namespace ccdfex
