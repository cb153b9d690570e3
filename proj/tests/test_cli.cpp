#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "kfg/coupled.hpp"
#include "kfg/json_io.hpp"

using namespace kfg;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result kfg_run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        v.push_back(l);
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep = ',')
{
    std::vector<std::string> v;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, sep);) {
        v.push_back(f);
    }
    return v;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content)
{
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST_CASE("range parsing")
{
    CHECK(cli::parse_range("0..2").lo == 0);
    CHECK(cli::parse_range("0..2").hi == 2);
    CHECK(cli::parse_range("-1..1").lo == -1);
    CHECK(cli::parse_range("3").hi == 3);
    CHECK_THROWS(cli::parse_range("2..1"));
    CHECK_THROWS(cli::parse_range("a..b"));
    CHECK_THROWS(cli::parse_range(""));
}

TEST_CASE("numbers are printed with 17 significant digits and round-trip")
{
    for (double x : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324}) {
        const std::string s = cli::format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
        CHECK(s.find('e') != std::string::npos);
    }
}

TEST_CASE("spectrum over a 3 x 3 x 1 grid gives 9 rows")
{
    const auto spec = temp_file("kfg_spec.json", R"({"M":1,"V0":0.1,"S0":0.1,"delta":0.1})");
    const Result r = kfg_run({"spectrum", "--spec", spec.string(), "--case", "V=S", "--nr", "0..2", "--N", "0..2", "--m", "0"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "n_r,N,m,case,route,E,residual,bound");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = split(rows[i]);
        REQUIRE(f.size() == 8);
        CHECK(f[3] == "VeqS");
        CHECK(f[4] == "NU");
        CHECK(f[7] == "1");
    }
}

TEST_CASE("command-line values override the spec file, and --C0 0 gives the conventional scheme")
{
    const auto spec = temp_file("kfg_spec_c0.json", R"({"V0":0.3,"S0":0.1,"delta":0.1,"C0":0.5})");
    const Result r = kfg_run({"spectrum", "--spec", spec.string(), "--V0", "0.1", "--case", "VeqS", "--C0", "0", "--nr", "0", "--N", "1"});
    REQUIRE(r.code == 0);
    const auto f = split(lines(r.out).at(1));
    PotentialSpec s;
    s.V0 = 0.1;
    s.S0 = 0.1;
    s.delta = 0.1;
    s.C0 = 0.0;
    const EnergyLevel lv = solve_combined(s, {0, 1, 0}, CouplingCase::VeqS);
    CHECK(std::strtod(f[5].c_str(), nullptr) == lv.E);
}

TEST_CASE("jsonl rows decode to the same levels as CSV")
{
    const std::vector<std::string> base{"spectrum", "--V0", "0.1", "--S0", "0.25", "--beta", "0.05", "--beta-prime", "0.1",
                                        "--nr", "0..1", "--N", "0..1", "--m", "1"};
    auto csv_args = base;
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "jsonl"});
    const auto csv = lines(kfg_run(csv_args).out);
    const auto js = lines(kfg_run(json_args).out);
    REQUIRE(csv.size() == js.size() + 1);
    for (std::size_t i = 0; i < js.size(); ++i) {
        const EnergyLevel lv = json::parse(js[i]).get<EnergyLevel>();
        const auto f = split(csv[i + 1]);
        CHECK(std::strtod(f[5].c_str(), nullptr) == lv.E);
        CHECK(std::strtod(f[6].c_str(), nullptr) == lv.residual);
        CHECK(std::stoi(f[0]) == lv.qn.n_r);
        CHECK((f[7] == "1") == lv.bound);
    }
}

TEST_CASE("thread count does not change the output")
{
    const std::vector<std::string> args{"spectrum", "--V0", "0.1", "--S0", "0.1", "--case", "VeqS", "--beta", "0.1",
                                        "--beta-prime", "0.2", "--nr", "0..1", "--N", "0..2", "--m", "0..1"};
    setenv("KFG_THREADS", "1", 1);
    const std::string one = kfg_run(args).out;
    setenv("KFG_THREADS", "4", 1);
    const std::string four = kfg_run(args).out;
    unsetenv("KFG_THREADS");
    CHECK(one == four);
    CHECK(cli::worker_count(3) <= 3);
}

TEST_CASE("empty spectrum: header only, exit 0")
{
    const Result r = kfg_run({"spectrum", "--V0", "0", "--S0", "0", "--nr", "0..1"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 1);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(kfg_run({}).code == 2);
    CHECK(kfg_run({"spectrum", "--bogus"}).code == 2);
    CHECK(kfg_run({"spectrum", "--case", "V==S"}).code == 2);
    CHECK(kfg_run({"spectrum", "--nr", "3..1"}).code == 2);
    CHECK(kfg_run({"spectrum", "--delta", "-1"}).code == 2);
    CHECK(kfg_run({"spectrum", "--format", "xml"}).code == 2);
    CHECK(kfg_run({"spectrum", "--spec", "/nonexistent/spec.json"}).code == 2);
    CHECK(kfg_run({"spectrum", "--use-exact-centrifugal", "--route", "nu"}).code == 2);
    CHECK(kfg_run({"wavefunction", "--nr", "0..1"}).code == 2);
    CHECK(kfg_run({"spectrum", "--help"}).code == 0);
}

TEST_CASE("infeasible ring rows are reported and every failure exits 1")
{
    const Result r = kfg_run({"spectrum", "--V0", "0.1", "--S0", "0.1", "--beta", "0.9", "--m", "0"});
    CHECK(r.code == 1);
    CHECK(r.err.find("InfeasibleRing") != std::string::npos);
}

TEST_CASE("oracle route reproduces the closed form")
{
    const Result nu = kfg_run({"spectrum", "--V0", "0.1", "--S0", "0.1", "--case", "VeqS", "--N", "1"});
    const Result ol = kfg_run({"spectrum", "--V0", "0.1", "--S0", "0.1", "--case", "VeqS", "--N", "1", "--route", "oracle"});
    REQUIRE(ol.code == 0);
    const auto a = split(lines(nu.out).at(1)), b = split(lines(ol.out).at(1));
    CHECK(b[4] == "oracle");
    CHECK(std::abs(std::strtod(a[5].c_str(), nullptr) - std::strtod(b[5].c_str(), nullptr)) < 1e-6);
}

TEST_CASE("wavefunction --check-norm prints a unit norm")
{
    for (const char* grid : {"r", "theta"}) {
        const Result r = kfg_run({"wavefunction", "--V0", "0.1", "--S0", "0.25", "--beta", "0.1", "--beta-prime", "0.2",
                                  "--nr", "1", "--N", "1", "--m", "1", "--grid", grid, "--check-norm"});
        REQUIRE(r.code == 0);
        const std::string last = lines(r.out).back();
        REQUIRE(last.rfind("# norm,", 0) == 0);
        CHECK(std::abs(std::strtod(last.c_str() + 7, nullptr) - 1.0) < 1e-8);
    }
}

TEST_CASE("SUSY overlay: ratio column is constant")
{
    const Result r = kfg_run({"wavefunction", "--V0", "0.1", "--S0", "0.1", "--case", "VeqS", "--N", "1", "--susy-overlay",
                              "--points", "50"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "r,chi,chi_susy,ratio");
    const double first = std::strtod(split(rows[1])[3].c_str(), nullptr);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(std::strtod(split(rows[i])[3].c_str(), nullptr) == doctest::Approx(first).epsilon(1e-9));
    }
    CHECK(kfg_run({"wavefunction", "--V0", "0.1", "--nr", "1", "--susy-overlay"}).code == 2);
}

TEST_CASE("theta samples for N = 1, m = 0 without a ring follow cos(theta)")
{
    const Result r = kfg_run({"wavefunction", "--V0", "0.1", "--S0", "0.1", "--N", "1", "--grid", "theta", "--points", "9",
                              "--format", "jsonl"});
    REQUIRE(r.code == 0);
    for (const auto& l : lines(r.out)) {
        const json j = json::parse(l);
        CHECK(j.at("Theta").get<double>() == doctest::Approx(std::sqrt(1.5) * std::cos(j.at("theta").get<double>())).scale(1.0));
    }
}

TEST_CASE("wavefunction of a missing level exits 1")
{
    CHECK(kfg_run({"wavefunction", "--V0", "0", "--S0", "0"}).code == 1);
}

TEST_CASE("verify: passing matrix, delta scan, degenerate spec")
{
    const Result ok = kfg_run({"verify", "--V0", "0.1", "--S0", "0.1", "--case", "VeqS", "--beta", "0.05", "--beta-prime",
                               "0.1", "--nr", "0..1", "--N", "0..1", "--m", "0..1", "--delta-scan", "0.2,0.1,0.05"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(ok.out.find("decreasing with delta: PASS") != std::string::npos);

    const Result none = kfg_run({"verify", "--V0", "0", "--S0", "0"});
    CHECK(none.code == 0);
    CHECK(none.out.find("no bound states") != std::string::npos);

    CHECK(kfg_run({"verify", "--route", "nu"}).code == 2);
    CHECK(kfg_run({"verify", "--delta-scan", "0.1,x"}).code == 2);
}

TEST_CASE("--out writes to a file")
{
    const auto path = std::filesystem::temp_directory_path() / "kfg_out.csv";
    std::filesystem::remove(path);
    const Result r = kfg_run({"spectrum", "--V0", "0.1", "--S0", "0.1", "--case", "VeqS", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n_r,N,m,case,route,E,residual,bound");
}
