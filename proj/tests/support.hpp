#pragma once

// Shared helpers for the test binaries: a one-sample Kolmogorov-Smirnov
// p-value (asymptotic), Pearson correlation, and a tiny popen wrapper used
// by the CLI tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace testsup {

// Asymptotic KS p-value for the hypothesis that `u` are iid Uniform(0,1).
// Callers pass probability transforms F(x_k) of their sample.
inline double ks_uniform_pvalue(std::vector<double> u)
{
    if (u.size() < 8) throw std::invalid_argument("ks_uniform_pvalue: sample too small");
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double hi = (static_cast<double>(k) + 1.0) / n - u[k];
        const double lo = u[k] - static_cast<double>(k) / n;
        d = std::max(d, std::max(hi, lo));
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        q += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

inline double pearson_corr(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("pearson_corr: bad input");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) { ma += a[k]; mb += b[k]; }
    ma /= n; mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

inline double sample_mean(const std::vector<double>& a)
{
    double s = 0.0;
    for (double v : a) s += v;
    return s / static_cast<double>(a.size());
}

struct CmdResult {
    int code = -1;
    std::string out;
};

// Runs a shell command, capturing stdout (stderr is discarded unless the
// caller redirects it inside `cmd`).
inline CmdResult run_cmd(const std::string& cmd)
{
    CmdResult r;
    const std::string full =
        (cmd.find("2>") == std::string::npos) ? cmd + " 2>/dev/null" : cmd;
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int rc = pclose(pipe);
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

} // namespace testsup
