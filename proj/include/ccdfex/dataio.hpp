#pragma once

#include <string>
#include <vector>

#include "ccdfex/distributions.hpp"
#include "ccdfex/simulation.hpp"

namespace ccdfex {

/// Two-column numeric CSV, optional header row (detected, not
/// required). Errors carry the file name and 1-based line number.
PairedSample read_paired_csv(const std::string& path);
PairedSample parse_paired_csv(const std::string& text, const std::string& name);

struct ExpFit {
    double lambda_hat = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

/// Maximum-likelihood exponential fit (rate = 1/mean) with the usual
/// information criteria.
ExpFit exp_fit(const std::vector<double>& x);

struct AdTest {
    double stat = 0.0;          // A^2 adjusted for the estimated rate
    double p_value = 0.0;       // interpolated, clamped to [1e-6, 0.999]
};

/// Anderson-Darling test of exponentiality with the rate estimated
/// from the data. Probability transforms are clamped away from 0/1
/// with a warning on stderr when that triggers.
AdTest ad_test_exponential(const std::vector<double>& x);

struct GofReport {
    std::string column;
    double lambda_hat = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double ad_stat = 0.0;
    double p_value = 0.0;
};

GofReport gof_exponential(const std::vector<double>& x, const std::string& column);

// --- report serialization (all doubles printed with %.17g so a write
// followed by a read restores values exactly) --------------------------

std::string study_to_csv(const StudyReport& rep);
StudyReport study_from_csv(const std::string& text);
std::string study_to_json(const StudyReport& rep);
StudyReport study_from_json(const std::string& text);

std::string gof_to_csv(const std::vector<GofReport>& reports);
std::vector<GofReport> gof_from_csv(const std::string& text);
std::string gof_to_json(const std::vector<GofReport>& reports);
std::vector<GofReport> gof_from_json(const std::string& text);

} // namespace ccdfex
