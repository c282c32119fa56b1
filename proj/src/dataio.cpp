#include "ccdfex/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ccdfex {
namespace {

std::string trim(const std::string& in) {
    std::size_t a = 0, b = in.size();
    while (a < b && std::isspace(static_cast<unsigned char>(in[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(in[b - 1]))) --b;
    return in.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

bool try_parse(const std::string& raw, double& out) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

double need_num(const std::string& raw, const std::string& ctx) {
    double v;
    if (!try_parse(raw, v))
        throw std::invalid_argument(ctx + ": expected a number, got '" + trim(raw) + "'");
    return v;
}

std::size_t need_count(const std::string& raw, const std::string& ctx) {
    const double v = need_num(raw, ctx);
    if (!(v >= 0.0) || v != std::floor(v))
        throw std::invalid_argument(ctx + ": expected a nonnegative integer, got '" +
                                    trim(raw) + "'");
    return static_cast<std::size_t>(v);
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

constexpr const char* kStudyHeader = "estimator,t1,t2,n,bias,mse,truth,excluded";
constexpr const char* kGofHeader = "column,lambda_hat,loglik,aic,bic,ad_stat,p_value";

// Stephens-style critical values for the exponential case with the
// rate estimated, and their significance levels.
constexpr double kAdCrit[5] = {0.922, 1.078, 1.341, 1.606, 1.957};
constexpr double kAdSig[5] = {0.15, 0.10, 0.05, 0.025, 0.01};

double ad_p_value(double astar) {
    const double* c = kAdCrit;
    const double* s = kAdSig;
    auto interp = [&](int a, int b) {
        const double slope = (std::log(s[b]) - std::log(s[a])) / (c[b] - c[a]);
        return std::exp(std::log(s[a]) + slope * (astar - c[a]));
    };
    double p;
    if (astar <= c[0]) p = interp(0, 1);
    else if (astar >= c[4]) p = interp(3, 4);
    else {
        int k = 0;
        while (k < 3 && astar > c[k + 1]) ++k;
        p = interp(k, k + 1);
    }
    return std::min(0.999, std::max(1e-6, p));
}

AdTest ad_from_lambda(const std::vector<double>& x, double lambda) {
    const std::size_t n = x.size();
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = -std::expm1(-lambda * x[k]);
    std::sort(u.begin(), u.end());
    bool clamped = false;
    for (double& v : u) {
        if (v < 1e-12) {
            v = 1e-12;
            clamped = true;
        } else if (v > 1.0 - 1e-12) {
            v = 1.0 - 1e-12;
            clamped = true;
        }
    }
    if (clamped)
        std::fprintf(stderr,
                     "warning: AD test clamped probability transforms away from 0/1\n");
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        s += (2.0 * static_cast<double>(k) + 1.0) *
             (std::log(u[k]) + std::log1p(-u[n - 1 - k]));
    const double a2 = -static_cast<double>(n) - s / static_cast<double>(n);
    AdTest out;
    out.stat = a2 * (1.0 + 0.6 / static_cast<double>(n));
    out.p_value = ad_p_value(out.stat);
    return out;
}

} // namespace

PairedSample parse_paired_csv(const std::string& text, const std::string& name) {
    std::vector<double> x1, x2;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool may_be_header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> fields = split(t, ',');
        if (fields.size() != 2)
            throw std::invalid_argument(name + " line " + std::to_string(lineno) +
                                        ": expected 2 comma-separated fields, found " +
                                        std::to_string(fields.size()));
        double a, b;
        const bool numeric = try_parse(fields[0], a) && try_parse(fields[1], b);
        if (!numeric) {
            if (may_be_header) {
                may_be_header = false; // single header row tolerated
                continue;
            }
            throw std::invalid_argument(name + " line " + std::to_string(lineno) +
                                        ": non-numeric row '" + t + "'");
        }
        may_be_header = false;
        if (!std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument(name + " line " + std::to_string(lineno) +
                                        ": non-finite value");
        x1.push_back(a);
        x2.push_back(b);
    }
    if (x1.empty()) throw std::invalid_argument(name + ": no data rows");
    return make_paired_sample(std::move(x1), std::move(x2));
}

PairedSample read_paired_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_paired_csv(buf.str(), path);
}

ExpFit exp_fit(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("exponential fit: empty data");
    double sum = 0.0;
    for (double v : x) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("exponential fit: data must be finite and nonnegative");
        sum += v;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("exponential fit: data mean must be positive");
    const double n = static_cast<double>(x.size());
    ExpFit f;
    f.lambda_hat = n / sum;
    f.loglik = n * std::log(f.lambda_hat) - f.lambda_hat * sum;
    f.aic = 2.0 - 2.0 * f.loglik;
    f.bic = std::log(n) - 2.0 * f.loglik;
    return f;
}

AdTest ad_test_exponential(const std::vector<double>& x) {
    return ad_from_lambda(x, exp_fit(x).lambda_hat);
}

GofReport gof_exponential(const std::vector<double>& x, const std::string& column) {
    const ExpFit f = exp_fit(x);
    const AdTest t = ad_from_lambda(x, f.lambda_hat);
    GofReport rep;
    rep.column = column;
    rep.lambda_hat = f.lambda_hat;
    rep.loglik = f.loglik;
    rep.aic = f.aic;
    rep.bic = f.bic;
    rep.ad_stat = t.stat;
    rep.p_value = t.p_value;
    return rep;
}

std::string study_to_csv(const StudyReport& rep) {
    std::ostringstream out;
    out << "# model=" << rep.model_name << "\n";
    out << "# component=" << rep.component << "\n";
    out << "# replications=" << rep.replications << "\n";
    out << "# seed=" << rep.seed << "\n";
    out << kStudyHeader << "\n";
    for (const StudyRow& r : rep.rows)
        out << r.estimator << ',' << fmt17(r.t1) << ',' << fmt17(r.t2) << ',' << r.n << ','
            << fmt17(r.bias) << ',' << fmt17(r.mse) << ',' << fmt17(r.truth) << ','
            << r.excluded << "\n";
    return out.str();
}

StudyReport study_from_csv(const std::string& text) {
    StudyReport rep;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::string ctx = "study csv line " + std::to_string(lineno);
        if (t[0] == '#') {
            const std::string meta = trim(t.substr(1));
            const std::size_t eq = meta.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = trim(meta.substr(0, eq));
            const std::string val = trim(meta.substr(eq + 1));
            if (key == "model") rep.model_name = val;
            else if (key == "component") rep.component = static_cast<int>(need_count(val, ctx));
            else if (key == "replications") rep.replications = need_count(val, ctx);
            else if (key == "seed") rep.seed = need_count(val, ctx);
            continue;
        }
        if (!saw_header) {
            if (t != kStudyHeader)
                throw std::invalid_argument(ctx + ": expected header '" +
                                            std::string(kStudyHeader) + "'");
            saw_header = true;
            continue;
        }
        const std::vector<std::string> f = split(t, ',');
        if (f.size() != 8)
            throw std::invalid_argument(ctx + ": expected 8 fields, found " +
                                        std::to_string(f.size()));
        StudyRow r;
        r.estimator = trim(f[0]);
        r.t1 = need_num(f[1], ctx);
        r.t2 = need_num(f[2], ctx);
        r.n = need_count(f[3], ctx);
        r.bias = need_num(f[4], ctx);
        r.mse = need_num(f[5], ctx);
        r.truth = need_num(f[6], ctx);
        r.excluded = need_count(f[7], ctx);
        rep.rows.push_back(r);
    }
    if (!saw_header) throw std::invalid_argument("study csv: missing header line");
    return rep;
}

std::string study_to_json(const StudyReport& rep) {
    nlohmann::json j;
    j["model"] = rep.model_name;
    j["component"] = rep.component;
    j["replications"] = rep.replications;
    j["seed"] = rep.seed;
    j["rows"] = nlohmann::json::array();
    for (const StudyRow& r : rep.rows) {
        nlohmann::json row;
        row["estimator"] = r.estimator;
        row["t1"] = r.t1;
        row["t2"] = r.t2;
        row["n"] = r.n;
        row["bias"] = r.bias;
        row["mse"] = r.mse;
        row["truth"] = r.truth;
        row["excluded"] = r.excluded;
        j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
}

namespace {

double json_num(const nlohmann::json& j) {
    if (j.is_null()) return std::nan("");
    return j.get<double>();
}

} // namespace

StudyReport study_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        StudyReport rep;
        rep.model_name = j.at("model").get<std::string>();
        rep.component = j.at("component").get<int>();
        rep.replications = j.at("replications").get<std::size_t>();
        rep.seed = j.at("seed").get<std::uint64_t>();
        for (const nlohmann::json& row : j.at("rows")) {
            StudyRow r;
            r.estimator = row.at("estimator").get<std::string>();
            r.t1 = json_num(row.at("t1"));
            r.t2 = json_num(row.at("t2"));
            r.n = row.at("n").get<std::size_t>();
            r.bias = json_num(row.at("bias"));
            r.mse = json_num(row.at("mse"));
            r.truth = json_num(row.at("truth"));
            r.excluded = row.at("excluded").get<std::size_t>();
            rep.rows.push_back(r);
        }
        return rep;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("study report json: ") + e.what());
    }
}

std::string gof_to_csv(const std::vector<GofReport>& reports) {
    std::ostringstream out;
    out << kGofHeader << "\n";
    for (const GofReport& r : reports)
        out << r.column << ',' << fmt17(r.lambda_hat) << ',' << fmt17(r.loglik) << ','
            << fmt17(r.aic) << ',' << fmt17(r.bic) << ',' << fmt17(r.ad_stat) << ','
            << fmt17(r.p_value) << "\n";
    return out.str();
}

std::vector<GofReport> gof_from_csv(const std::string& text) {
    std::vector<GofReport> reports;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string ctx = "gof csv line " + std::to_string(lineno);
        if (!saw_header) {
            if (t != kGofHeader)
                throw std::invalid_argument(ctx + ": expected header '" +
                                            std::string(kGofHeader) + "'");
            saw_header = true;
            continue;
        }
        const std::vector<std::string> f = split(t, ',');
        if (f.size() != 7)
            throw std::invalid_argument(ctx + ": expected 7 fields, found " +
                                        std::to_string(f.size()));
        GofReport r;
        r.column = trim(f[0]);
        r.lambda_hat = need_num(f[1], ctx);
        r.loglik = need_num(f[2], ctx);
        r.aic = need_num(f[3], ctx);
        r.bic = need_num(f[4], ctx);
        r.ad_stat = need_num(f[5], ctx);
        r.p_value = need_num(f[6], ctx);
        reports.push_back(r);
    }
    if (!saw_header) throw std::invalid_argument("gof csv: missing header line");
    return reports;
}

std::string gof_to_json(const std::vector<GofReport>& reports) {
    nlohmann::json j = nlohmann::json::array();
    for (const GofReport& r : reports) {
        nlohmann::json row;
        row["column"] = r.column;
        row["lambda_hat"] = r.lambda_hat;
        row["loglik"] = r.loglik;
        row["aic"] = r.aic;
        row["bic"] = r.bic;
        row["ad_stat"] = r.ad_stat;
        row["p_value"] = r.p_value;
        j.push_back(row);
    }
    return j.dump(2) + "\n";
}

std::vector<GofReport> gof_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        std::vector<GofReport> reports;
        for (const nlohmann::json& row : j) {
            GofReport r;
            r.column = row.at("column").get<std::string>();
            r.lambda_hat = json_num(row.at("lambda_hat"));
            r.loglik = json_num(row.at("loglik"));
            r.aic = json_num(row.at("aic"));
            r.bic = json_num(row.at("bic"));
            r.ad_stat = json_num(row.at("ad_stat"));
            r.p_value = json_num(row.at("p_value"));
            reports.push_back(r);
        }
        return reports;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("gof report json: ") + e.what());
    }
}

} // namespace ccdfex
