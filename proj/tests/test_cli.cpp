#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using testsup::run_cmd;

namespace {

std::string cli()
{
    const char* p = std::getenv("CCDFEX_CLI");
    REQUIRE_MESSAGE(p != nullptr, "CCDFEX_CLI must point at the binary");
    return p;
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> fields_of(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, ',')) out.push_back(f);
    return out;
}

} // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cmd(cli()).code == 2);
    CHECK(run_cmd(cli() + " compute").code == 2);
    CHECK(run_cmd(cli() + " nosuchcommand").code == 2);
    CHECK(run_cmd(cli() + " compute --model 'nosuch:a=1' --t 0.5,0.5").code == 2);
    CHECK(run_cmd(cli() + " compute --model uniform --t 0.5").code == 2);
    CHECK(run_cmd(cli() + " compute --model uniform --t 0.5,0.5 --measure zeta").code == 2);
    CHECK(run_cmd(cli() + " estimate --data /nope.csv --t 1,1 --estimator wat").code == 2);
    CHECK(run_cmd(cli() + " verify --check nosuch --model uniform").code == 2);
    CHECK(run_cmd(cli() + " figure --kind fig9").code == 2);
    CHECK(run_cmd(cli() + " simulate --config exotic").code == 2);
}

TEST_CASE("help text documents the model grammar everywhere") {
    for (const std::string sub :
         {"compute", "estimate", "simulate", "verify", "gof", "catalog", "figure"}) {
        const auto r = run_cmd(cli() + " " + sub + " --help");
        CHECK(r.code == 0);
        CHECK(r.out.find("Model specs") != std::string::npos);
        CHECK(r.out.find("product:m1=exp(rate=1)") != std::string::npos);
    }
    const auto top = run_cmd(cli() + " --help");
    CHECK(top.code == 0);
    CHECK(top.out.find("Model specs") != std::string::npos);
}

TEST_CASE("compute prints the closed uniform value") {
    const auto r = run_cmd(
        cli() + " compute --model uniform:c1=1,c2=1 --measure ccdfex --i 1 --t 0.3,0.7");
    CHECK(r.code == 0);
    CHECK(r.out == "-0.05\n");
    // Explicit numeric route agrees to quadrature accuracy.
    const auto n = run_cmd(
        cli() + " compute --model uniform:c1=1,c2=1 --t 0.3,0.7 --route numeric");
    CHECK(n.code == 0);
    CHECK(std::stod(n.out) == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("compute covers the companion measures") {
    auto value = [&](const std::string& extra) {
        const auto r = run_cmd(cli() + " compute --model uniform:c1=1,c2=1 --t 0.5,0.5 "
                               + extra);
        REQUIRE(r.code == 0);
        return std::stod(r.out);
    };
    CHECK(value("--measure brhr") == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(value("--measure eit") == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(value("--measure entropy") == doctest::Approx(0.125).epsilon(1e-7));
    CHECK(value("--measure df") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(value("--measure zeta --c 0.1 --d 0.4") ==
          doctest::Approx(0.5 * (0.16 - 0.01) / 2.0).epsilon(1e-9));
    CHECK(value("--measure cond-ccdfex") == doctest::Approx(-0.5 / 6.0).epsilon(1e-8));
    CHECK(value("--measure cond-ccdfex --kappa 1") ==
          doctest::Approx(-1.0 / 6.0).epsilon(1e-8));
    CHECK(value("--measure cond-eit") == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("compute maps domain failures to exit 1") {
    const auto r = run_cmd(cli() + " compute --model uniform:c1=1,c2=1 --t 0,0.5 2>&1");
    CHECK(r.code == 1);
    CHECK(r.out.find("error:") != std::string::npos);
    // Asking for a closed form that does not exist is a domain error too.
    CHECK(run_cmd(cli() + " compute --model extremevalue --t 1,1 --route closed").code == 1);
}

TEST_CASE("pinned lower limit reroutes to quadrature") {
    const auto r = run_cmd(
        cli() + " compute --model extremevalue --t 1.3,0.8 --lo-override 0");
    REQUIRE(r.code == 0);
    const auto full = run_cmd(cli() + " compute --model extremevalue --t 1.3,0.8");
    REQUIRE(full.code == 0);
    // The pinned value excludes the negative-axis tail, so it is larger.
    CHECK(std::stod(r.out) > std::stod(full.out));
}

TEST_CASE("estimate reports both plug-ins") {
    const std::string path = "/tmp/ccdfex_cli_pairs.csv";
    {
        std::ofstream out(path);
        out << "x1,x2\n1,1\n2,2\n";
    }
    const auto r = run_cmd(cli() + " estimate --data " + path + " --t 2,2");
    CHECK(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] == "# n=2");
    CHECK(ls[1].rfind("# bandwidth=", 0) == 0);
    CHECK(ls[2] == "estimator,value");
    CHECK(ls[3] == "empirical,-0.125");
    CHECK(ls[4].rfind("kernel,", 0) == 0);

    const auto emp = run_cmd(cli() + " estimate --data " + path
                             + " --t 2,2 --estimator empirical");
    CHECK(lines_of(emp.out).size() == 3);

    // Fixed bandwidth close to zero degenerates to the empirical value,
    // which at (2.5,2.5) is -(1/2)(0.25*1 + 1*0.5) = -0.375 by hand.
    const auto ker = run_cmd(cli() + " estimate --data " + path
                             + " --t 2.5,2.5 --estimator kernel --h 1e-6");
    const auto kls = lines_of(ker.out);
    REQUIRE(kls.size() == 4);
    CHECK(std::stod(fields_of(kls[3])[1]) == doctest::Approx(-0.375).epsilon(1e-4));
    const auto emp25 = run_cmd(cli() + " estimate --data " + path
                               + " --t 2.5,2.5 --estimator empirical");
    CHECK(std::stod(fields_of(lines_of(emp25.out)[2])[1])
          == doctest::Approx(-0.375).epsilon(1e-12));

    // No mass below the point: domain error.
    CHECK(run_cmd(cli() + " estimate --data " + path + " --t 0.5,0.5").code == 1);
    std::remove(path.c_str());
}

TEST_CASE("simulate emits a deterministic study table") {
    const std::string args = " simulate --model uniform:c1=1,c2=1 --sizes 10,20 "
                             "--reps 5 --points 0.5,0.5 --seed 3";
    const auto a = run_cmd(cli() + args);
    REQUIRE(a.code == 0);
    const auto ls = lines_of(a.out);
    // 4 metadata lines + header + 2 estimators x 1 point x 2 sizes.
    REQUIRE(ls.size() == 9);
    CHECK(ls[0] == "# model=uniform:c1=1,c2=1");
    CHECK(ls[4] == "estimator,t1,t2,n,bias,mse,truth,excluded");
    for (std::size_t k = 5; k < ls.size(); ++k) {
        const auto f = fields_of(ls[k]);
        REQUIRE(f.size() == 8);
        CHECK(std::stod(f[6]) == doctest::Approx(-0.5 / 6.0).epsilon(1e-12));
    }
    const auto b = run_cmd(cli() + args);
    CHECK(a.out == b.out);

    // JSON variant parses and carries the same shape.
    const auto j = run_cmd(cli() + args + " --format json");
    REQUIRE(j.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(j.out);
    CHECK(doc.at("rows").size() == 4);
    CHECK(doc.at("seed") == 3);

    // --out writes the same bytes to a file.
    const std::string path = "/tmp/ccdfex_cli_study.csv";
    const auto f = run_cmd(cli() + args + " --out " + path);
    CHECK(f.code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a.out);
    std::remove(path.c_str());
}

TEST_CASE("verify passes a true bound and fails a reversed ordering") {
    const auto ok = run_cmd(cli() + " verify --check eit-bound "
                            "--model 'power:m=2,n=2,theta=-1.5' --grid default");
    CHECK(ok.code == 0);
    const nlohmann::json v = nlohmann::json::parse(ok.out);
    CHECK(v.at("holds") == true);
    CHECK(v.at("checked") == 49);

    const auto bad = run_cmd(cli() + " verify --check order --model uniform:c1=1,c2=1 "
                             "--other sumuniform --grid 5x5 2>&1");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("verdict: order violated") != std::string::npos);
    const auto body = run_cmd(cli() + " verify --check order --model uniform:c1=1,c2=1 "
                              "--other sumuniform --grid 5x5");
    const nlohmann::json w = nlohmann::json::parse(body.out);
    CHECK(w.at("holds") == false);
    CHECK(!w.at("counterexamples").empty());
}

TEST_CASE("verify covers the remaining checks") {
    CHECK(run_cmd(cli() + " verify --check entropy-bound "
                  "--model 'gumbeluniform:theta=-0.2' --grid default --i 2").code == 0);
    CHECK(run_cmd(cli() + " verify --check characterization "
                  "--model 'product:m1=uniform(c=1),m2=power(a=2)' --tol 1e-8").code == 0);
    CHECK(run_cmd(cli() + " verify --check characterization "
                  "--model 'gumbeluniform:theta=-1' --tol 1e-3 2>&1").code == 1);
    CHECK(run_cmd(cli() + " verify --check monotonicity "
                  "--model 'gumbeluniform:theta=-0.5' --grid 4x4 --tol 1e-7").code == 0);
    CHECK(run_cmd(cli() + " verify --check derivative-identity "
                  "--model sumuniform --grid 3x3 --tol 1e-4 --step 1e-3").code == 0);
    CHECK(run_cmd(cli() + " verify --check cond-derivative-identity "
                  "--model uniform:c1=1,c2=1 --grid 3x3 --tol 1e-4").code == 0);
    const auto z = run_cmd(cli() + " verify --check zeta --model uniform:c1=1,c2=1 "
                           "--t 0.6,0.6 --draws 20000 --seed 7");
    CHECK(z.code == 0);
    const nlohmann::json zj = nlohmann::json::parse(z.out);
    CHECK(zj.at("kept") > 5000);
    // order requires --other.
    CHECK(run_cmd(cli() + " verify --check order --model uniform:c1=1,c2=1").code == 2);
}

TEST_CASE("catalog lists every entry") {
    const auto r = run_cmd(cli() + " catalog");
    CHECK(r.code == 0);
    const auto ls = lines_of(r.out);
    CHECK(ls.size() == 10);
    CHECK(r.out.find("downton") != std::string::npos);
    CHECK(r.out.find("gumbeluniform") != std::string::npos);
}

TEST_CASE("gof reports both columns") {
    const std::string path = "/tmp/ccdfex_cli_gof.csv";
    {
        std::ofstream out(path);
        out << "0.31,0.62\n1.2,2.4\n0.05,0.1\n2.7,5.4\n0.9,1.8\n";
    }
    const auto r = run_cmd(cli() + " gof --data " + path);
    CHECK(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "column,lambda_hat,loglik,aic,bic,ad_stat,p_value");
    CHECK(fields_of(ls[1])[0] == "x1");
    CHECK(fields_of(ls[2])[0] == "x2");
    // Column 2 is column 1 scaled by 2: same AD statistic.
    CHECK(std::stod(fields_of(ls[1])[5])
          == doctest::Approx(std::stod(fields_of(ls[2])[5])).epsilon(1e-9));

    const auto j = run_cmd(cli() + " gof --data " + path + " --format json");
    CHECK(j.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(j.out);
    CHECK(doc.size() == 2);
    CHECK(doc[0].at("column") == "x1");
    std::remove(path.c_str());
}

TEST_CASE("figure presets") {
    const auto f3 = run_cmd(cli() + " figure --kind fig3");
    REQUIRE(f3.code == 0);
    const auto l3 = lines_of(f3.out);
    REQUIRE(l3.size() == 10);
    CHECK(l3[0] == "t,value");
    for (std::size_t k = 1; k < l3.size(); ++k)
        CHECK(std::stod(fields_of(l3[k])[1]) >= 0.0);

    const auto f1 = run_cmd(cli() + " figure --kind fig1");
    REQUIRE(f1.code == 0);
    for (std::size_t k = 1; k < lines_of(f1.out).size(); ++k)
        CHECK(std::stod(fields_of(lines_of(f1.out)[k])[1]) >= 0.0);

    const auto f2 = run_cmd(cli() + " figure --kind fig2");
    REQUIRE(f2.code == 0);
    for (std::size_t k = 1; k < lines_of(f2.out).size(); ++k)
        CHECK(std::stod(fields_of(lines_of(f2.out)[k])[1]) >= 0.0);

    const auto f4 = run_cmd(cli() + " figure --kind fig4 --n 100 --seed 1");
    REQUIRE(f4.code == 0);
    const auto l4 = lines_of(f4.out);
    REQUIRE(l4.size() == 10);
    CHECK(l4[0] == "t1,t2,truth,empirical,kernel");
    for (std::size_t k = 1; k < l4.size(); ++k) {
        const auto f = fields_of(l4[k]);
        REQUIRE(f.size() == 5);
        CHECK(std::stod(f[2]) == doctest::Approx(-std::stod(f[0]) / 6.0).epsilon(1e-12));
        CHECK(std::isfinite(std::stod(f[3])));
        CHECK(std::isfinite(std::stod(f[4])));
    }
    const auto again = run_cmd(cli() + " figure --kind fig4 --n 100 --seed 1");
    CHECK(again.out == f4.out);
}
