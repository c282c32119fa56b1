#include "ccdfex/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "ccdfex/numerics.hpp"
#include "ccdfex/rng.hpp"

namespace ccdfex {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.2831853071795864769252867665590;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_component(int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("component index must be 1 or 2");
}

std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// Bisection inverse of a nondecreasing df on (lo, hi).
double invert_df(const std::function<double(double)>& G, double u, double lo, double hi) {
    double a = lo, b = hi;
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (a + b);
        if (!(b - a > 1e-15 * std::max(1.0, std::abs(mid)))) break;
        if (G(mid) < u) a = mid;
        else b = mid;
    }
    return 0.5 * (a + b);
}

double log_bessel_i0(double z) {
    if (z < 600.0) return std::log(bessel_i0(z));
    const double r = 1.0 / z;
    return z - 0.5 * std::log(kTwoPi * z) + std::log1p(r / 8.0 + 9.0 * r * r / 128.0);
}

double positive_uniform(Rng& rng) {
    double u = rng.uniform01();
    while (u <= 0.0) u = rng.uniform01();
    return u;
}

} // namespace

PairedSample make_paired_sample(std::vector<double> x1, std::vector<double> x2) {
    require(x1.size() == x2.size(), "paired sample: component lengths differ");
    require(!x1.empty(), "paired sample: empty data");
    for (std::size_t k = 0; k < x1.size(); ++k)
        require(std::isfinite(x1[k]) && std::isfinite(x2[k]),
                "paired sample: non-finite value at row " + std::to_string(k + 1));
    return PairedSample{std::move(x1), std::move(x2)};
}

double UnivariateDf::cdf(double t) const {
    if (t < lo) return 0.0;
    return clamp01(df(std::min(t, hi)));
}

UnivariateDf uniform_margin(double c) {
    require(std::isfinite(c) && c > 0.0, "uniform margin: requires c > 0");
    UnivariateDf m;
    m.name = "uniform(c=" + num_str(c) + ")";
    m.lo = 0.0;
    m.hi = c;
    m.df = [c](double t) { return t / c; };
    m.pdf = [c](double t) { return (t >= 0.0 && t <= c) ? 1.0 / c : 0.0; };
    m.quantile = [c](double u) { return c * u; };
    return m;
}

UnivariateDf exponential_margin(double rate) {
    require(std::isfinite(rate) && rate > 0.0, "exp margin: requires rate > 0");
    UnivariateDf m;
    m.name = "exp(rate=" + num_str(rate) + ")";
    m.lo = 0.0;
    m.hi = kInf;
    m.df = [rate](double t) { return -std::expm1(-rate * t); };
    m.pdf = [rate](double t) { return (t >= 0.0) ? rate * std::exp(-rate * t) : 0.0; };
    m.quantile = [rate](double u) { return -std::log1p(-u) / rate; };
    return m;
}

UnivariateDf power_margin(double a) {
    require(std::isfinite(a) && a > 0.0, "power margin: requires a > 0");
    UnivariateDf m;
    m.name = "power(a=" + num_str(a) + ")";
    m.lo = 0.0;
    m.hi = 1.0;
    m.df = [a](double t) { return std::pow(t, a); };
    m.pdf = [a](double t) { return (t > 0.0 && t <= 1.0) ? a * std::pow(t, a - 1.0) : 0.0; };
    m.quantile = [a](double u) { return std::pow(u, 1.0 / a); };
    return m;
}

UnivariateDf gumbel_margin() {
    UnivariateDf m;
    m.name = "gumbel";
    m.lo = -kInf;
    m.hi = kInf;
    m.df = [](double t) { return std::exp(-std::exp(-t)); };
    m.pdf = [](double t) { return std::exp(-t - std::exp(-t)); };
    m.quantile = [](double u) { return -std::log(-std::log(u)); };
    return m;
}

double BivariateModel::cdf(double t1, double t2) const {
    // Strictly below the floor only: a df may carry mass on the
    // boundary itself (df_raw owns that edge).
    if (t1 < support.lo1 || t2 < support.lo2) return 0.0;
    return clamp01(df_raw(std::min(t1, support.hi1), std::min(t2, support.hi2)));
}

// --- catalog ---------------------------------------------------------

BivariateModel gumbel_uniform(double theta) {
    require(std::isfinite(theta) && theta <= 0.0, "gumbeluniform: requires theta <= 0");
    BivariateModel m;
    m.name = "gumbeluniform";
    m.support = {0.0, 1.0, 0.0, 1.0};
    m.df_raw = [theta](double t1, double t2) {
        if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
        return t1 * t2 * std::exp(theta * std::log(t1) * std::log(t2));
    };
    m.pdf = [theta](double x1, double x2) {
        if (x1 <= 0.0 || x2 <= 0.0 || x1 > 1.0 || x2 > 1.0) return 0.0;
        const double l1 = std::log(x1), l2 = std::log(x2);
        return std::exp(theta * l1 * l2) *
               ((1.0 + theta * l1) * (1.0 + theta * l2) + theta);
    };
    m.df_partial = [theta](int i, double t1, double t2) {
        if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
        const double ti = (i == 1) ? t1 : t2;
        const double tj = (i == 1) ? t2 : t1;
        const double f = t1 * t2 * std::exp(theta * std::log(t1) * std::log(t2));
        return f * (1.0 + theta * std::log(tj)) / ti;
    };
    m.marginal_df = [](int, double t) { return clamp01(t); };
    m.marginal_pdf = [](int, double t) { return (t >= 0.0 && t <= 1.0) ? 1.0 : 0.0; };
    m.conditional = [theta](int, double x, double tj) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::pow(x, 1.0 + theta * std::log(tj)) * (1.0 + theta * std::log(x));
    };
    m.closed_ccdfex = [theta](int i, double t1, double t2) {
        const double ti = (i == 1) ? t1 : t2;
        const double tj = (i == 1) ? t2 : t1;
        return -ti / (2.0 * (2.0 * theta * std::log(tj) + 3.0));
    };
    if (theta >= -1.0) {
        // conditional df is a valid, increasing df only for theta in [-1, 0]
        m.sampler = [theta](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            PairedSample s;
            s.x1.reserve(n);
            s.x2.reserve(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double x1 = positive_uniform(rng);
                const double u2 = rng.uniform01();
                const double a = 1.0 + theta * std::log(x1);
                auto G = [theta, a](double x) {
                    return (x <= 0.0) ? 0.0
                                      : std::pow(x, a) * (1.0 + theta * std::log(x));
                };
                s.x1.push_back(x1);
                s.x2.push_back(invert_df(G, u2, 0.0, 1.0));
            }
            return s;
        };
    }
    return m;
}

BivariateModel sum_uniform() {
    BivariateModel m;
    m.name = "sumuniform";
    m.support = {0.0, 1.0, 0.0, 1.0};
    m.df_raw = [](double t1, double t2) { return 0.5 * t1 * t2 * (t1 + t2); };
    m.pdf = [](double x1, double x2) {
        if (x1 < 0.0 || x1 > 1.0 || x2 < 0.0 || x2 > 1.0) return 0.0;
        return x1 + x2;
    };
    m.df_partial = [](int i, double t1, double t2) {
        const double ti = (i == 1) ? t1 : t2;
        const double tj = (i == 1) ? t2 : t1;
        return 0.5 * tj * (2.0 * ti + tj);
    };
    m.marginal_df = [](int, double t) { return 0.5 * t * (t + 1.0); };
    m.marginal_pdf = [](int, double t) { return (t >= 0.0 && t <= 1.0) ? t + 0.5 : 0.0; };
    m.conditional = [](int, double x, double tj) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return x * (x + 2.0 * tj) / (1.0 + 2.0 * tj);
    };
    m.closed_ccdfex = [](int i, double t1, double t2) {
        const double a = (i == 1) ? t1 : t2;
        const double b = (i == 1) ? t2 : t1;
        const double s = a + b;
        return -a * (6.0 * a * a + 15.0 * a * b + 10.0 * b * b) / (60.0 * s * s);
    };
    m.sampler = [](std::size_t n, std::uint64_t seed) {
        // density x1 + x2 as an equal mixture of (sqrt(U), U') and (U, sqrt(U'))
        Rng rng(seed);
        PairedSample s;
        s.x1.reserve(n);
        s.x2.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const bool first = rng.uniform01() < 0.5;
            const double a = std::sqrt(rng.uniform01());
            const double b = rng.uniform01();
            s.x1.push_back(first ? a : b);
            s.x2.push_back(first ? b : a);
        }
        return s;
    };
    return m;
}

BivariateModel extreme_value() {
    BivariateModel m;
    m.name = "extremevalue";
    m.support = {-kInf, kInf, -kInf, kInf};
    m.df_raw = [](double t1, double t2) {
        return std::exp(-std::exp(-t1) - std::exp(-t2));
    };
    m.pdf = [](double x1, double x2) {
        return std::exp(-x1 - x2 - std::exp(-x1) - std::exp(-x2));
    };
    m.df_partial = [](int i, double t1, double t2) {
        const double ti = (i == 1) ? t1 : t2;
        return std::exp(-ti - std::exp(-t1) - std::exp(-t2));
    };
    m.marginal_df = [](int, double t) { return std::exp(-std::exp(-t)); };
    m.marginal_pdf = [](int, double t) { return std::exp(-t - std::exp(-t)); };
    m.conditional = [](int, double x, double) { return std::exp(-std::exp(-x)); };
    m.sampler = [](std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        PairedSample s;
        s.x1.reserve(n);
        s.x2.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            s.x1.push_back(-std::log(-std::log(positive_uniform(rng))));
            s.x2.push_back(-std::log(-std::log(positive_uniform(rng))));
        }
        return s;
    };
    return m;
}

double extreme_value_closed_ccdfex(int i, double t1, double t2) {
    check_component(i);
    const double ti = (i == 1) ? t1 : t2;
    if (!(ti > 0.0))
        throw std::domain_error("extreme value closed form requires t_i > 0");
    const double a = 2.0 * std::exp(-ti);
    return 0.5 * std::exp(a) * (exp_e1(2.0) - exp_e1(a));
}

BivariateModel bivariate_uniform(double c1, double c2) {
    require(std::isfinite(c1) && c1 > 0.0 && std::isfinite(c2) && c2 > 0.0,
            "uniform: requires c1 > 0 and c2 > 0");
    BivariateModel m;
    m.name = "uniform";
    m.support = {0.0, c1, 0.0, c2};
    m.df_raw = [c1, c2](double t1, double t2) { return (t1 / c1) * (t2 / c2); };
    m.pdf = [c1, c2](double x1, double x2) {
        return (x1 >= 0.0 && x1 <= c1 && x2 >= 0.0 && x2 <= c2) ? 1.0 / (c1 * c2) : 0.0;
    };
    m.df_partial = [c1, c2](int i, double t1, double t2) {
        return (i == 1) ? t2 / (c1 * c2) : t1 / (c1 * c2);
    };
    m.marginal_df = [c1, c2](int i, double t) { return t / ((i == 1) ? c1 : c2); };
    m.marginal_pdf = [c1, c2](int i, double t) {
        const double c = (i == 1) ? c1 : c2;
        return (t >= 0.0 && t <= c) ? 1.0 / c : 0.0;
    };
    m.conditional = [c1, c2](int i, double x, double) {
        return clamp01(x / ((i == 1) ? c1 : c2));
    };
    m.closed_ccdfex = [](int i, double t1, double t2) {
        return -((i == 1) ? t1 : t2) / 6.0;
    };
    m.sampler = [c1, c2](std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        PairedSample s;
        s.x1.reserve(n);
        s.x2.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            s.x1.push_back(c1 * rng.uniform01());
            s.x2.push_back(c2 * rng.uniform01());
        }
        return s;
    };
    return m;
}

BivariateModel bivariate_power(double mm, double nn, double theta) {
    require(std::isfinite(mm) && mm > 0.0 && std::isfinite(nn) && nn > 0.0,
            "power: requires m > 0 and n > 0");
    require(std::isfinite(theta) && theta < 0.0, "power: requires theta < 0");
    const double p1 = 2.0 * mm - 1.0;
    const double p2 = 2.0 * nn - 1.0;
    BivariateModel m;
    m.name = "power";
    m.support = {0.0, 1.0, 0.0, 1.0};
    m.df_raw = [p1, p2, theta](double t1, double t2) {
        if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
        return std::pow(t1, p1) * std::pow(t2, p2) *
               std::exp(theta * std::log(t1) * std::log(t2));
    };
    m.pdf = [p1, p2, theta](double x1, double x2) {
        if (x1 <= 0.0 || x2 <= 0.0 || x1 > 1.0 || x2 > 1.0) return 0.0;
        const double l1 = std::log(x1), l2 = std::log(x2);
        const double f = std::exp(p1 * l1 + p2 * l2 + theta * l1 * l2);
        return f * ((p1 + theta * l2) * (p2 + theta * l1) + theta) / (x1 * x2);
    };
    m.df_partial = [p1, p2, theta](int i, double t1, double t2) {
        if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
        const double l1 = std::log(t1), l2 = std::log(t2);
        const double f = std::exp(p1 * l1 + p2 * l2 + theta * l1 * l2);
        return (i == 1) ? f * (p1 + theta * l2) / t1 : f * (p2 + theta * l1) / t2;
    };
    m.marginal_df = [p1, p2](int i, double t) {
        return (t <= 0.0) ? 0.0 : std::pow(t, (i == 1) ? p1 : p2);
    };
    m.marginal_pdf = [p1, p2](int i, double t) {
        if (t <= 0.0 || t > 1.0) return 0.0;
        const double p = (i == 1) ? p1 : p2;
        return p * std::pow(t, p - 1.0);
    };
    m.conditional = [p1, p2, theta](int i, double x, double tj) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double pi_ = (i == 1) ? p1 : p2;
        const double pj = (i == 1) ? p2 : p1;
        return std::pow(x, pi_ + theta * std::log(tj)) *
               (1.0 + (theta / pj) * std::log(x));
    };
    m.closed_ccdfex = [p1, p2, theta](int i, double t1, double t2) {
        const double ti = (i == 1) ? t1 : t2;
        const double tj = (i == 1) ? t2 : t1;
        const double q = 2.0 * ((i == 1) ? p1 : p2) + 1.0;
        return -ti / (2.0 * (2.0 * theta * std::log(tj) + q));
    };
    if (theta >= -p1 * p2) {
        m.sampler = [p1, p2, theta](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            PairedSample s;
            s.x1.reserve(n);
            s.x2.reserve(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double x1 = std::pow(positive_uniform(rng), 1.0 / p1);
                const double u2 = rng.uniform01();
                const double a = p2 + theta * std::log(x1);
                auto G = [p1, theta, a](double x) {
                    return (x <= 0.0) ? 0.0
                                      : std::pow(x, a) * (1.0 + (theta / p1) * std::log(x));
                };
                s.x1.push_back(x1);
                s.x2.push_back(invert_df(G, u2, 0.0, 1.0));
            }
            return s;
        };
    }
    return m;
}

BivariateModel general_power(double b1, double b2, double c1, double c2, double theta) {
    require(std::isfinite(b1) && b1 > 0.0 && std::isfinite(b2) && b2 > 0.0,
            "generalpower: requires b1 > 0 and b2 > 0");
    require(std::isfinite(c1) && c1 > 0.0 && std::isfinite(c2) && c2 > 0.0,
            "generalpower: requires c1 > 0 and c2 > 0");
    require(std::isfinite(theta) && theta <= 0.0, "generalpower: requires theta <= 0");
    BivariateModel m;
    m.name = "generalpower";
    m.support = {0.0, b1, 0.0, b2};
    m.df_raw = [b1, b2, c1, c2, theta](double t1, double t2) {
        if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
        const double u1 = std::log(t1 / b1), u2 = std::log(t2 / b2);
        return std::exp(c1 * u1 + c2 * u2 + theta * u1 * u2);
    };
    m.pdf = [b1, b2, c1, c2, theta](double x1, double x2) {
        if (x1 <= 0.0 || x2 <= 0.0 || x1 > b1 || x2 > b2) return 0.0;
        const double u1 = std::log(x1 / b1), u2 = std::log(x2 / b2);
        const double f = std::exp(c1 * u1 + c2 * u2 + theta * u1 * u2);
        return f * ((c1 + theta * u2) * (c2 + theta * u1) + theta) / (x1 * x2);
    };
    m.df_partial = [b1, b2, c1, c2, theta](int i, double t1, double t2) {
        if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
        const double u1 = std::log(t1 / b1), u2 = std::log(t2 / b2);
        const double f = std::exp(c1 * u1 + c2 * u2 + theta * u1 * u2);
        return (i == 1) ? f * (c1 + theta * u2) / t1 : f * (c2 + theta * u1) / t2;
    };
    m.marginal_df = [b1, b2, c1, c2](int i, double t) {
        if (t <= 0.0) return 0.0;
        return (i == 1) ? std::pow(t / b1, c1) : std::pow(t / b2, c2);
    };
    m.marginal_pdf = [b1, b2, c1, c2](int i, double t) {
        const double b = (i == 1) ? b1 : b2;
        const double c = (i == 1) ? c1 : c2;
        if (t <= 0.0 || t > b) return 0.0;
        return c * std::pow(t / b, c) / t;
    };
    m.conditional = [b1, b2, c1, c2, theta](int i, double x, double tj) {
        const double bi = (i == 1) ? b1 : b2;
        const double bj = (i == 1) ? b2 : b1;
        const double ci = (i == 1) ? c1 : c2;
        const double cj = (i == 1) ? c2 : c1;
        if (x <= 0.0) return 0.0;
        if (x >= bi) return 1.0;
        const double ux = std::log(x / bi);
        const double uj = std::log(tj / bj);
        return std::pow(x / bi, ci + theta * uj) * (1.0 + (theta / cj) * ux);
    };
    m.closed_ccdfex = [b1, b2, c1, c2, theta](int i, double t1, double t2) {
        const double ti = (i == 1) ? t1 : t2;
        const double ci = (i == 1) ? c1 : c2;
        const double uj = (i == 1) ? std::log(t2 / b2) : std::log(t1 / b1);
        return -ti / (2.0 * (1.0 + 2.0 * ci + 2.0 * theta * uj));
    };
    if (theta >= -c1 * c2) {
        m.sampler = [b1, b2, c1, c2, theta](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            PairedSample s;
            s.x1.reserve(n);
            s.x2.reserve(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double x1 = b1 * std::pow(positive_uniform(rng), 1.0 / c1);
                const double u2 = rng.uniform01();
                const double a = c2 + theta * std::log(x1 / b1);
                auto G = [b2, c1, theta, a](double x) {
                    if (x <= 0.0) return 0.0;
                    const double ux = std::log(x / b2);
                    return std::pow(x / b2, a) * (1.0 + (theta / c1) * ux);
                };
                s.x1.push_back(x1);
                s.x2.push_back(invert_df(G, u2, 0.0, b2));
            }
            return s;
        };
    }
    return m;
}

BivariateModel moran_downton(double mean1, double mean2, double rho) {
    require(std::isfinite(mean1) && mean1 > 0.0 && std::isfinite(mean2) && mean2 > 0.0,
            "downton: requires mean1 > 0 and mean2 > 0");
    require(std::isfinite(rho) && rho >= 0.0 && rho < 1.0,
            "downton: requires 0 <= rho < 1");
    const double l1 = 1.0 / mean1, l2 = 1.0 / mean2;
    const double om = 1.0 - rho;
    const double s1 = l1 / om, s2 = l2 / om;
    BivariateModel m;
    m.name = "downton";
    m.support = {0.0, kInf, 0.0, kInf};
    // F(t1,t2) = (1-rho) sum_k rho^k P(k+1, s1 t1) P(k+1, s2 t2), with
    // P the regularized lower incomplete gamma; the k-th term pair is
    // updated by subtracting the Poisson mass at k from each factor.
    m.df_raw = [rho, om, s1, s2](double t1, double t2) {
        if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
        const double x = s1 * t1, y = s2 * t2;
        double pois1 = std::exp(-x), pois2 = std::exp(-y);
        double q1 = -std::expm1(-x), q2 = -std::expm1(-y);
        double w = om;
        double sum = w * q1 * q2;
        for (int k = 1; k < 20000; ++k) {
            w *= rho;
            if (w < 1e-17) break;
            pois1 *= x / k;
            pois2 *= y / k;
            q1 = std::max(0.0, q1 - pois1);
            q2 = std::max(0.0, q2 - pois2);
            sum += w * q1 * q2;
        }
        return sum;
    };
    m.pdf = [rho, om, l1, l2](double x1, double x2) {
        // The density limit on the axes is positive, and the formula is
        // finite there; only genuinely negative arguments are outside.
        if (x1 < 0.0 || x2 < 0.0) return 0.0;
        double lp = std::log(l1 * l2 / om) - (l1 * x1 + l2 * x2) / om;
        if (rho > 0.0)
            lp += log_bessel_i0(2.0 * std::sqrt(rho * l1 * l2 * x1 * x2) / om);
        return std::exp(lp);
    };
    m.df_partial = [rho, om, s1, s2](int i, double t1, double t2) {
        if (t1 < 0.0 || t2 < 0.0) return 0.0;
        const double xi = (i == 1) ? s1 * t1 : s2 * t2;
        const double xj = (i == 1) ? s2 * t2 : s1 * t1;
        const double si = (i == 1) ? s1 : s2;
        double poisi = std::exp(-xi), poisj = std::exp(-xj);
        double qj = -std::expm1(-xj);
        double w = om;
        double sum = w * poisi * qj;
        for (int k = 1; k < 20000; ++k) {
            w *= rho;
            if (w < 1e-17) break;
            poisi *= xi / k;
            poisj *= xj / k;
            qj = std::max(0.0, qj - poisj);
            sum += w * poisi * qj;
        }
        return si * sum;
    };
    m.marginal_df = [l1, l2](int i, double t) {
        if (t <= 0.0) return 0.0;
        return -std::expm1(-((i == 1) ? l1 : l2) * t);
    };
    m.marginal_pdf = [l1, l2](int i, double t) {
        if (t < 0.0) return 0.0;
        const double l = (i == 1) ? l1 : l2;
        return l * std::exp(-l * t);
    };
    m.sampler = [om, mean1, mean2](std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        PairedSample s;
        s.x1.reserve(n);
        s.x2.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t N = rng.geometric(om);
            double g1 = 0.0, g2 = 0.0;
            for (std::uint64_t j = 0; j < N; ++j) g1 += rng.exponential();
            for (std::uint64_t j = 0; j < N; ++j) g2 += rng.exponential();
            s.x1.push_back(om * mean1 * g1);
            s.x2.push_back(om * mean2 * g2);
        }
        return s;
    };
    return m;
}

// --- combinators -----------------------------------------------------

BivariateModel product_model(const UnivariateDf& f1, const UnivariateDf& f2) {
    require(static_cast<bool>(f1.df) && static_cast<bool>(f2.df),
            "product: both margins need a df");
    BivariateModel m;
    m.name = "product(" + f1.name + "," + f2.name + ")";
    m.support = {f1.lo, f1.hi, f2.lo, f2.hi};
    m.df_raw = [f1, f2](double t1, double t2) { return f1.cdf(t1) * f2.cdf(t2); };
    if (f1.pdf && f2.pdf) {
        m.pdf = [f1, f2](double x1, double x2) { return f1.pdf(x1) * f2.pdf(x2); };
        m.df_partial = [f1, f2](int i, double t1, double t2) {
            return (i == 1) ? f1.pdf(t1) * f2.cdf(t2) : f1.cdf(t1) * f2.pdf(t2);
        };
        m.marginal_pdf = [f1, f2](int i, double t) {
            return (i == 1) ? f1.pdf(t) : f2.pdf(t);
        };
    }
    m.marginal_df = [f1, f2](int i, double t) {
        return (i == 1) ? f1.cdf(t) : f2.cdf(t);
    };
    m.conditional = [f1, f2](int i, double x, double) {
        return (i == 1) ? f1.cdf(x) : f2.cdf(x);
    };
    if (f1.quantile && f2.quantile) {
        m.sampler = [f1, f2](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            PairedSample s;
            s.x1.reserve(n);
            s.x2.reserve(n);
            for (std::size_t k = 0; k < n; ++k) {
                s.x1.push_back(f1.quantile(positive_uniform(rng)));
                s.x2.push_back(f2.quantile(positive_uniform(rng)));
            }
            return s;
        };
    }
    return m;
}

BivariateModel linear_transform(const BivariateModel& base,
                                double mu1, double mu2,
                                double eta1, double eta2) {
    require(std::isfinite(mu1) && mu1 > 0.0 && std::isfinite(mu2) && mu2 > 0.0,
            "linear: requires mu1 > 0 and mu2 > 0");
    require(std::isfinite(eta1) && std::isfinite(eta2),
            "linear: requires finite eta1 and eta2");
    const BivariateModel b = base;
    BivariateModel m;
    m.name = "linear(" + b.name + ")";
    m.support = {mu1 * b.support.lo1 + eta1, mu1 * b.support.hi1 + eta1,
                 mu2 * b.support.lo2 + eta2, mu2 * b.support.hi2 + eta2};
    auto back = [mu1, mu2, eta1, eta2](int i, double t) {
        return (i == 1) ? (t - eta1) / mu1 : (t - eta2) / mu2;
    };
    m.df_raw = [b, back](double t1, double t2) {
        return b.cdf(back(1, t1), back(2, t2));
    };
    if (b.pdf)
        m.pdf = [b, back, mu1, mu2](double x1, double x2) {
            return b.pdf(back(1, x1), back(2, x2)) / (mu1 * mu2);
        };
    if (b.df_partial)
        m.df_partial = [b, back, mu1, mu2](int i, double t1, double t2) {
            return b.df_partial(i, back(1, t1), back(2, t2)) / ((i == 1) ? mu1 : mu2);
        };
    if (b.marginal_df)
        m.marginal_df = [b, back](int i, double t) { return b.marginal_df(i, back(i, t)); };
    if (b.marginal_pdf)
        m.marginal_pdf = [b, back, mu1, mu2](int i, double t) {
            return b.marginal_pdf(i, back(i, t)) / ((i == 1) ? mu1 : mu2);
        };
    if (b.conditional)
        m.conditional = [b, back](int i, double x, double tj) {
            return b.conditional(i, back(i, x), back(3 - i, tj));
        };
    if (b.sampler)
        m.sampler = [b, mu1, mu2, eta1, eta2](std::size_t n, std::uint64_t seed) {
            PairedSample s = b.sampler(n, seed);
            for (double& v : s.x1) v = mu1 * v + eta1;
            for (double& v : s.x2) v = mu2 * v + eta2;
            return s;
        };
    return m;
}

BivariateModel power_transform(const BivariateModel& base, double theta) {
    require(std::isfinite(theta) && theta > 0.0, "powertransform: requires theta > 0");
    const BivariateModel b = base;
    BivariateModel m;
    m.name = "powertransform(" + b.name + "^" + num_str(theta) + ")";
    m.support = b.support;
    m.df_raw = [b, theta](double t1, double t2) {
        const double g = b.cdf(t1, t2);
        return (g <= 0.0) ? 0.0 : std::pow(g, theta);
    };
    if (b.df_partial)
        m.df_partial = [b, theta](int i, double t1, double t2) {
            const double g = b.cdf(t1, t2);
            if (g <= 0.0) return 0.0;
            return theta * std::pow(g, theta - 1.0) * b.df_partial(i, t1, t2);
        };
    if (b.pdf && b.df_partial)
        m.pdf = [b, theta](double x1, double x2) {
            const double g = b.cdf(x1, x2);
            if (g <= 0.0) return 0.0;
            const double g1 = b.df_partial(1, x1, x2);
            const double g2 = b.df_partial(2, x1, x2);
            return theta * std::pow(g, theta - 2.0) *
                   ((theta - 1.0) * g1 * g2 + g * b.pdf(x1, x2));
        };
    if (b.marginal_df) {
        m.marginal_df = [b, theta](int i, double t) {
            const double M = clamp01(b.marginal_df(i, t));
            return (M <= 0.0) ? 0.0 : std::pow(M, theta);
        };
        if (b.marginal_pdf)
            m.marginal_pdf = [b, theta](int i, double t) {
                const double M = clamp01(b.marginal_df(i, t));
                if (M <= 0.0) return 0.0;
                return theta * std::pow(M, theta - 1.0) * b.marginal_pdf(i, t);
            };
        if (b.conditional)
            m.conditional = [b, theta](int i, double x, double tj) {
                const double g = (i == 1) ? b.cdf(x, tj) : b.cdf(tj, x);
                const double Mj = clamp01(b.marginal_df(3 - i, tj));
                if (g <= 0.0 || Mj <= 0.0) return 0.0;
                return clamp01(std::pow(g / Mj, theta - 1.0) * b.conditional(i, x, tj));
            };
    }
    return m;
}

BivariateModel power_transform(const BivariateModel& base,
                               const std::function<double(double, double)>& exponent,
                               const std::string& label) {
    require(static_cast<bool>(exponent), "powertransform: exponent callable required");
    const BivariateModel b = base;
    BivariateModel m;
    m.name = label;
    m.support = b.support;
    m.df_raw = [b, exponent](double t1, double t2) {
        const double e = exponent(t1, t2);
        if (!(std::isfinite(e) && e > 0.0))
            throw std::invalid_argument("powertransform: exponent must stay positive and finite");
        const double g = b.cdf(t1, t2);
        return (g <= 0.0) ? 0.0 : std::pow(g, e);
    };
    // a varying exponent can break monotonicity; refuse those up front
    const SupportRect box = evaluation_box(m);
    const int n = 21;
    auto node = [](double lo, double hi, int k) {
        return lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    };
    double prev;
    for (int r = 0; r < n; ++r) {
        const double t2 = node(box.lo2, box.hi2, r);
        prev = -1.0;
        for (int c = 0; c < n; ++c) {
            const double v = m.cdf(node(box.lo1, box.hi1, c), t2);
            if (v < prev - 1e-9)
                throw std::invalid_argument(
                    "powertransform: resulting df is decreasing along component 1");
            prev = v;
        }
    }
    for (int c = 0; c < n; ++c) {
        const double t1 = node(box.lo1, box.hi1, c);
        prev = -1.0;
        for (int r = 0; r < n; ++r) {
            const double v = m.cdf(t1, node(box.lo2, box.hi2, r));
            if (v < prev - 1e-9)
                throw std::invalid_argument(
                    "powertransform: resulting df is decreasing along component 2");
            prev = v;
        }
    }
    return m;
}

// --- generic accessors -----------------------------------------------

namespace {

double axis_scale(const BivariateModel& m, int i) {
    const SupportRect box = evaluation_box(m);
    const double lo = (i == 1) ? box.lo1 : box.lo2;
    const double hi = (i == 1) ? box.hi1 : box.hi2;
    return std::max(hi - lo, 1e-6);
}

} // namespace

double joint_pdf(const BivariateModel& m, double x1, double x2) {
    if (m.pdf) return m.pdf(x1, x2);
    const double h1 = 1e-5 * axis_scale(m, 1);
    const double h2 = 1e-5 * axis_scale(m, 2);
    const double v = (m.cdf(x1 + h1, x2 + h2) - m.cdf(x1 + h1, x2 - h2) -
                      m.cdf(x1 - h1, x2 + h2) + m.cdf(x1 - h1, x2 - h2)) /
                     (4.0 * h1 * h2);
    return std::max(0.0, v);
}

double df_partial(const BivariateModel& m, int i, double t1, double t2) {
    check_component(i);
    if (m.df_partial) return m.df_partial(i, t1, t2);
    const double h = 1e-5 * axis_scale(m, i);
    auto f = [&](double t) { return (i == 1) ? m.cdf(t, t2) : m.cdf(t1, t); };
    return central_diff(f, (i == 1) ? t1 : t2, h);
}

double marginal_df(const BivariateModel& m, int i, double t) {
    check_component(i);
    if (m.marginal_df) return clamp01(m.marginal_df(i, t));
    const int j = 3 - i;
    const double hi_j = (j == 1) ? m.support.hi1 : m.support.hi2;
    const double lo_j = (j == 1) ? m.support.lo1 : m.support.lo2;
    auto at = [&](double other) { return (i == 1) ? m.cdf(t, other) : m.cdf(other, t); };
    if (std::isfinite(hi_j)) return at(hi_j);
    double b = std::max(1.0, std::isfinite(lo_j) ? lo_j + 1.0 : 1.0);
    double prev = at(b);
    for (int k = 0; k < 80; ++k) {
        b *= 2.0;
        const double cur = at(b);
        if (std::abs(cur - prev) < 1e-13) return cur;
        prev = cur;
    }
    return prev;
}

double marginal_pdf(const BivariateModel& m, int i, double t) {
    check_component(i);
    if (m.marginal_pdf) return std::max(0.0, m.marginal_pdf(i, t));
    const double h = 1e-5 * axis_scale(m, i);
    auto f = [&](double x) { return marginal_df(m, i, x); };
    return std::max(0.0, central_diff(f, t, h));
}

double conditional_df(const BivariateModel& m, int i, double x_i, double t_j) {
    check_component(i);
    if (m.conditional) return clamp01(m.conditional(i, x_i, t_j));
    const int j = 3 - i;
    const double den = marginal_pdf(m, j, t_j);
    if (den < 1e-12)
        throw std::domain_error("conditional df: conditioning density below 1e-12 at t_j=" +
                                num_str(t_j));
    const double num = (i == 1) ? df_partial(m, 2, x_i, t_j) : df_partial(m, 1, t_j, x_i);
    return clamp01(num / den);
}

PairedSample sample(const BivariateModel& m, std::size_t n, std::uint64_t seed) {
    if (!m.sampler)
        throw std::logic_error("sample: model '" + m.name + "' has no sampler");
    require(n >= 1, "sample: n must be at least 1");
    return m.sampler(n, seed);
}

SupportRect evaluation_box(const BivariateModel& m) {
    auto walk = [&](int i, bool upper) {
        double cur;
        if (upper)
            cur = std::isfinite((i == 1) ? m.support.lo1 : m.support.lo2)
                      ? ((i == 1) ? m.support.lo1 : m.support.lo2)
                      : 0.0;
        else
            cur = std::isfinite((i == 1) ? m.support.hi1 : m.support.hi2)
                      ? ((i == 1) ? m.support.hi1 : m.support.hi2)
                      : 0.0;
        double step = 1.0;
        for (int k = 0; k < 300; ++k) {
            const double F = marginal_df(m, i, cur);
            if (upper && F >= 0.999) break;
            if (!upper && F <= 0.001) break;
            cur += upper ? step : -step;
            step *= 1.5;
        }
        return cur;
    };
    SupportRect box = m.support;
    if (!std::isfinite(box.lo1)) box.lo1 = walk(1, false);
    if (!std::isfinite(box.hi1)) box.hi1 = walk(1, true);
    if (!std::isfinite(box.lo2)) box.lo2 = walk(2, false);
    if (!std::isfinite(box.hi2)) box.hi2 = walk(2, true);
    return box;
}

// --- model-spec grammar ----------------------------------------------

namespace {

std::string trim(const std::string& in) {
    std::size_t a = 0, b = in.size();
    while (a < b && std::isspace(static_cast<unsigned char>(in[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(in[b - 1]))) --b;
    return in.substr(a, b - a);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        else if (ch == ')') {
            --depth;
            if (depth < 0)
                throw std::invalid_argument("model spec: unbalanced ')' in '" + s + "'");
        }
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (depth != 0)
        throw std::invalid_argument("model spec: unbalanced '(' in '" + s + "'");
    parts.push_back(cur);
    return parts;
}

using KvMap = std::map<std::string, std::string>;

KvMap parse_kv(const std::string& body, const std::string& ctx) {
    KvMap kv;
    if (trim(body).empty()) return kv;
    for (const std::string& item : split_top(body, ',')) {
        const std::string it = trim(item);
        if (it.empty())
            throw std::invalid_argument("model spec: empty parameter in '" + ctx + "'");
        std::size_t eq = std::string::npos;
        int depth = 0;
        for (std::size_t k = 0; k < it.size(); ++k) {
            if (it[k] == '(') ++depth;
            else if (it[k] == ')') --depth;
            else if (it[k] == '=' && depth == 0) {
                eq = k;
                break;
            }
        }
        if (eq == std::string::npos || eq == 0 || eq + 1 == it.size())
            throw std::invalid_argument("model spec: expected key=value, got '" + it + "'");
        const std::string key = trim(it.substr(0, eq));
        const std::string val = trim(it.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("model spec: expected key=value, got '" + it + "'");
        if (!kv.emplace(key, val).second)
            throw std::invalid_argument("model spec: duplicate parameter '" + key + "'");
    }
    return kv;
}

double to_number(const std::string& key, const std::string& val) {
    std::size_t pos = 0;
    double v = 0.0;
    bool ok = true;
    try {
        v = std::stod(val, &pos);
    } catch (const std::exception&) {
        ok = false;
    }
    if (!ok || pos != val.size())
        throw std::invalid_argument("model spec: parameter '" + key +
                                    "' expects a number, got '" + val + "'");
    return v;
}

std::string take_raw(KvMap& kv, const std::string& key, const std::string& model) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument("model spec: " + model + " requires parameter '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
}

double take_num(KvMap& kv, const std::string& key, const std::string& model) {
    return to_number(key, take_raw(kv, key, model));
}

double take_num_or(KvMap& kv, const std::string& key, double dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    const double v = to_number(key, it->second);
    kv.erase(it);
    return v;
}

void expect_empty(const KvMap& kv, const std::string& name) {
    if (kv.empty()) return;
    std::string keys;
    for (const auto& [k, v] : kv) {
        (void)v;
        if (!keys.empty()) keys += ", ";
        keys += "'" + k + "'";
    }
    throw std::invalid_argument("model spec: unknown parameter " + keys + " for '" + name + "'");
}

/// Nested values accept "(full:spec)" shells or the "ident(args)"
/// shorthand, both normalized to a plain spec string.
std::string nested_to_spec(const std::string& val) {
    const std::string v = trim(val);
    if (v.empty()) throw std::invalid_argument("model spec: empty nested value");
    if (v.front() == '(') {
        if (v.back() != ')')
            throw std::invalid_argument("model spec: malformed nested value '" + val + "'");
        return trim(v.substr(1, v.size() - 2));
    }
    const std::size_t par = v.find('(');
    if (par == std::string::npos) return v;
    if (v.back() != ')')
        throw std::invalid_argument("model spec: malformed nested value '" + val + "'");
    const std::string head = trim(v.substr(0, par));
    const std::string args = trim(v.substr(par + 1, v.size() - par - 2));
    return args.empty() ? head : head + ":" + args;
}

UnivariateDf parse_margin_spec(const std::string& val) {
    const std::string spec = nested_to_spec(val);
    const std::size_t colon = spec.find(':');
    const std::string name = trim(colon == std::string::npos ? spec : spec.substr(0, colon));
    KvMap kv = parse_kv(colon == std::string::npos ? "" : spec.substr(colon + 1), spec);
    UnivariateDf out;
    if (name == "uniform") {
        out = uniform_margin(take_num_or(kv, "c", 1.0));
    } else if (name == "exp") {
        out = exponential_margin(take_num_or(kv, "rate", 1.0));
    } else if (name == "power") {
        out = power_margin(take_num(kv, "a", "power margin"));
    } else if (name == "gumbel") {
        out = gumbel_margin();
    } else {
        throw std::invalid_argument("model spec: unknown margin '" + name +
                                    "' (known: uniform, exp, power, gumbel)");
    }
    expect_empty(kv, name);
    return out;
}

} // namespace

BivariateModel parse_model_spec(const std::string& spec) {
    const std::string s = trim(spec);
    if (s.empty()) throw std::invalid_argument("model spec: empty string");
    const std::size_t colon = s.find(':');
    const std::string name = trim(colon == std::string::npos ? s : s.substr(0, colon));
    KvMap kv = parse_kv(colon == std::string::npos ? "" : s.substr(colon + 1), s);
    BivariateModel out;
    if (name == "uniform") {
        const double c1 = take_num_or(kv, "c1", 1.0);
        const double c2 = take_num_or(kv, "c2", 1.0);
        out = bivariate_uniform(c1, c2);
    } else if (name == "sumuniform") {
        out = sum_uniform();
    } else if (name == "gumbeluniform") {
        out = gumbel_uniform(take_num(kv, "theta", "gumbeluniform"));
    } else if (name == "extremevalue") {
        out = extreme_value();
    } else if (name == "power") {
        const double mm = take_num(kv, "m", "power");
        const double nn = take_num(kv, "n", "power");
        out = bivariate_power(mm, nn, take_num(kv, "theta", "power"));
    } else if (name == "generalpower") {
        const double b1 = take_num_or(kv, "b1", 1.0);
        const double b2 = take_num_or(kv, "b2", 1.0);
        const double c1 = take_num(kv, "c1", "generalpower");
        const double c2 = take_num(kv, "c2", "generalpower");
        out = general_power(b1, b2, c1, c2, take_num(kv, "theta", "generalpower"));
    } else if (name == "downton") {
        const double m1 = take_num(kv, "mean1", "downton");
        const double m2 = take_num(kv, "mean2", "downton");
        out = moran_downton(m1, m2, take_num(kv, "rho", "downton"));
    } else if (name == "product") {
        const UnivariateDf a = parse_margin_spec(take_raw(kv, "m1", "product"));
        const UnivariateDf b = parse_margin_spec(take_raw(kv, "m2", "product"));
        out = product_model(a, b);
    } else if (name == "linear") {
        const BivariateModel base = parse_model_spec(nested_to_spec(take_raw(kv, "base", "linear")));
        const double mu1 = take_num_or(kv, "mu1", 1.0);
        const double mu2 = take_num_or(kv, "mu2", 1.0);
        const double e1 = take_num_or(kv, "eta1", 0.0);
        const double e2 = take_num_or(kv, "eta2", 0.0);
        out = linear_transform(base, mu1, mu2, e1, e2);
    } else if (name == "powertransform") {
        const BivariateModel base =
            parse_model_spec(nested_to_spec(take_raw(kv, "base", "powertransform")));
        out = power_transform(base, take_num(kv, "theta", "powertransform"));
    } else {
        throw std::invalid_argument(
            "model spec: unknown model '" + name +
            "' (known: uniform, sumuniform, gumbeluniform, extremevalue, power, "
            "generalpower, downton, product, linear, powertransform)");
    }
    expect_empty(kv, name);
    return out;
}

std::vector<std::string> catalog_summary() {
    return {
        "uniform          independent uniforms on [0,c1]x[0,c2]; c1,c2 > 0 (default 1)",
        "sumuniform       joint density x1+x2 on the unit square; no parameters",
        "gumbeluniform    F = t1 t2 exp(theta ln t1 ln t2) on (0,1)^2; theta <= 0",
        "extremevalue     independent standard Gumbel margins on R^2; no parameters",
        "power            F = t1^(2m-1) t2^(2n-1) exp(theta ln t1 ln t2); m,n > 0, theta < 0",
        "generalpower     F = (t1/b1)^c1 (t2/b2)^c2 exp(theta ln(t1/b1) ln(t2/b2)); b,c > 0, theta <= 0",
        "downton          correlated exponentials; mean1,mean2 > 0, 0 <= rho < 1",
        "product          product:m1=<margin>,m2=<margin>; margins: uniform(c=..), exp(rate=..), power(a=..), gumbel",
        "linear           linear:base=(<model>),mu1=..,mu2=..,eta1=..,eta2=..; mu_i > 0",
        "powertransform   powertransform:base=(<model>),theta=..; theta > 0",
    };
}

} // namespace ccdfex
