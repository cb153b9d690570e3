#include "commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "kfg/angular.hpp"
#include "kfg/coupled.hpp"
#include "kfg/errors.hpp"
#include "kfg/json_io.hpp"
#include "kfg/nu_radial.hpp"
#include "kfg/oracle.hpp"
#include "kfg/special_functions.hpp"
#include "kfg/susy.hpp"

namespace kfg::cli {

Range parse_range(std::string_view text)
{
    auto to_int = [&](std::string_view s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw std::invalid_argument("bad integer '" + std::string(s) + "' in range '" + std::string(text) + "'");
        }
        return v;
    };
    Range r;
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        r.lo = r.hi = to_int(text);
    } else {
        r.lo = to_int(text.substr(0, dots));
        r.hi = to_int(text.substr(dots + 2));
    }
    if (r.lo > r.hi) {
        throw std::invalid_argument("empty range '" + std::string(text) + "'");
    }
    return r;
}

std::string format_double(double x)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 16);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

unsigned worker_count(std::size_t jobs)
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("KFG_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) {
            n = static_cast<unsigned>(v);
        }
    }
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

namespace {

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Options shared by every subcommand.
struct Common
{
    std::string spec_file;
    std::optional<double> M, V0, S0, delta, beta, beta_prime, C0;
    std::string coupling{"VneqS"};
    std::string nr{"0"}, N{"0"}, m{"0"};
    std::string out_file;
    std::string format{"csv"};
    std::string route{"auto"};
    bool exact{false};
    bool freeze{false};
    double tol{1e-12};
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--spec", c.spec_file, "JSON potential spec");
    auto number = [&](const std::string& name, std::optional<double>& slot, const std::string& help) {
        app->add_option_function<double>(name, [&slot](const double& v) { slot = v; }, help);
    };
    number("--M", c.M, "rest mass");
    number("--V0", c.V0, "vector Hulthen strength");
    number("--S0", c.S0, "scalar Hulthen strength");
    number("--delta", c.delta, "screening parameter");
    number("--beta", c.beta, "ring strength (cos theta part)");
    number("--beta-prime", c.beta_prime, "ring strength (constant part)");
    number("--C0", c.C0, "centrifugal approximation constant");
    app->add_option("--case", c.coupling, "VneqS, VeqS or VeqmS (V!=S, V=S, V=-S also accepted)");
    app->add_option("--nr", c.nr, "radial quantum numbers A..B");
    app->add_option("--N", c.N, "angular degrees A..B");
    app->add_option("--m", c.m, "magnetic quantum numbers A..B");
    app->add_option("--out", c.out_file, "output file (default stdout)");
    app->add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    app->add_option("--route", c.route, "auto, nu, susy or oracle")->check(CLI::IsMember({"auto", "nu", "susy", "oracle"}));
    app->add_flag("--use-exact-centrifugal", c.exact, "oracle with 1/r^2 instead of the approximation");
    app->add_flag("--freeze-lambda", c.freeze, "evaluate the angular eigenvalue once at E = M");
    app->add_option("--tol", c.tol, "fixed-point tolerance on E")->check(CLI::PositiveNumber);
}

struct Setup
{
    PotentialSpec spec;
    CouplingCase coupling{CouplingCase::VneqS};
    Range nr, N, m;
    std::vector<QuantumNumbers> tuples;
    Route route{Route::NU};
};

Setup resolve(const Common& c)
{
    Setup s;
    if (!c.spec_file.empty()) {
        std::ifstream in(c.spec_file);
        if (!in) {
            throw UsageError("cannot open spec file '" + c.spec_file + "'");
        }
        try {
            s.spec = json::parse(in).get<PotentialSpec>();
        } catch (const json::exception& e) {
            throw UsageError(std::string("malformed spec file: ") + e.what());
        }
    }
    auto take = [](const std::optional<double>& flag, double& field) {
        if (flag) {
            field = *flag;
        }
    };
    take(c.M, s.spec.M);
    take(c.V0, s.spec.V0);
    take(c.S0, s.spec.S0);
    take(c.delta, s.spec.delta);
    take(c.beta, s.spec.beta);
    take(c.beta_prime, s.spec.beta_prime);
    take(c.C0, s.spec.C0);
    try {
        s.spec.validate();
        s.coupling = coupling_from_string(c.coupling);
        s.nr = parse_range(c.nr);
        s.N = parse_range(c.N);
        s.m = parse_range(c.m);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (s.nr.lo < 0 || s.N.lo < 0) {
        throw UsageError("n_r and N must be nonnegative");
    }
    for (int a = s.nr.lo; a <= s.nr.hi; ++a) {
        for (int b = s.N.lo; b <= s.N.hi; ++b) {
            for (int k = s.m.lo; k <= s.m.hi; ++k) {
                s.tuples.push_back({a, b, k});
            }
        }
    }
    if (c.route == "nu" || (c.route == "auto" && !c.exact)) {
        s.route = Route::NU;
    } else if (c.route == "susy") {
        s.route = Route::SUSY;
    } else {
        s.route = Route::Oracle;
    }
    if (c.exact && s.route != Route::Oracle) {
        throw UsageError("--use-exact-centrifugal needs the oracle route");
    }
    return s;
}

/// Runs `fn(i)` for i in [0, n) on up to worker_count(n) threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

/// Either stdout or the --out file.
class Sink
{
  public:
    Sink(const std::string& path, std::ostream& fallback)
        : stream_(&fallback)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw UsageError("cannot write '" + path + "'");
            }
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

bool is_empty_spectrum(ErrorKind k) { return k == ErrorKind::NoBoundState || k == ErrorKind::NotBound; }

/// One converged level for the requested route.
EnergyLevel solve_level(const Setup& s, const Common& c, const QuantumNumbers& qn)
{
    CombinedOptions opt;
    opt.tol = c.tol;
    opt.freeze_lambda = c.freeze;
    opt.route = s.route == Route::SUSY ? Route::SUSY : Route::NU;
    EnergyLevel lv = solve_combined(s.spec, qn, s.coupling, opt);
    if (s.route != Route::Oracle) {
        return lv;
    }
    EnergyLevel ol = solve_ode_energy(with_coupling(s.spec, s.coupling), qn.n_r, lv.lambda, !c.exact, {}, lv.E);
    ol.qn = qn;
    ol.coupling = s.coupling;
    ol.bound = lv.bound;
    return ol;
}

struct Outcome
{
    std::optional<EnergyLevel> level;
    std::optional<Error> error;
};

void write_level(std::ostream& os, const std::string& format, const EnergyLevel& lv)
{
    if (format == "jsonl") {
        os << json(lv).dump() << '\n';
        return;
    }
    os << lv.qn.n_r << ',' << lv.qn.N << ',' << lv.qn.m << ',' << to_string(lv.coupling) << ',' << to_string(lv.route)
       << ',' << format_double(lv.E) << ',' << format_double(lv.residual) << ',' << (lv.bound ? 1 : 0) << '\n';
}

int cmd_spectrum(const Common& c, std::ostream& out, std::ostream& err)
{
    const Setup s = resolve(c);
    std::vector<Outcome> results(s.tuples.size());
    parallel_for(s.tuples.size(), [&](std::size_t i) {
        try {
            results[i].level = solve_level(s, c, s.tuples[i]);
        } catch (const Error& e) {
            results[i].error = e;
        }
    });

    Sink sink(c.out_file, out);
    std::ostream& os = *sink;
    if (c.format == "csv") {
        os << "n_r,N,m,case,route,E,residual,bound\n";
    }
    std::size_t failures = 0, solved = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (r.level) {
            write_level(os, c.format, *r.level);
            ++solved;
            continue;
        }
        if (is_empty_spectrum(r.error->kind())) {
            continue;
        }
        ++failures;
        const QuantumNumbers& qn = s.tuples[i];
        if (c.format == "jsonl") {
            os << json{{"n_r", qn.n_r}, {"N", qn.N}, {"m", qn.m}, {"case", std::string(to_string(s.coupling))},
                       {"error", std::string(to_string(r.error->kind()))}, {"message", r.error->what()}}
                      .dump()
               << '\n';
        } else {
            err << "error n_r=" << qn.n_r << " N=" << qn.N << " m=" << qn.m << ": " << r.error->what() << '\n';
        }
    }
    return (failures > 0 && solved == 0) ? exit_failure : exit_ok;
}

struct WaveOptions
{
    std::string grid{"r"};
    int points{201};
    double r_max{0.0};
    bool check_norm{false};
    bool susy_overlay{false};
};

int cmd_wavefunction(const Common& c, const WaveOptions& w, std::ostream& out, std::ostream& err)
{
    const Setup s = resolve(c);
    if (s.tuples.size() != 1) {
        throw UsageError("wavefunction needs a single (n_r, N, m)");
    }
    if (w.points < 2) {
        throw UsageError("--points must be at least 2");
    }
    const QuantumNumbers qn = s.tuples.front();
    if (w.susy_overlay && (qn.n_r != 0 || w.grid != "r")) {
        throw UsageError("--susy-overlay applies to the radial n_r = 0 state only");
    }
    const PotentialSpec eff = with_coupling(s.spec, s.coupling);
    EnergyLevel lv;
    try {
        CombinedOptions opt;
        opt.tol = c.tol;
        opt.freeze_lambda = c.freeze;
        lv = solve_combined(s.spec, qn, s.coupling, opt);
    } catch (const Error& e) {
        err << "no such level: " << e.what() << '\n';
        return exit_failure;
    }

    Sink sink(c.out_file, out);
    std::ostream& os = *sink;
    const bool jsonl = c.format == "jsonl";
    double norm = 0.0;
    if (w.grid == "theta") {
        const AngularSolution ang = solve_angular(eff, lv.E, qn.m, qn.N);
        if (!jsonl) {
            os << "theta,Theta\n";
        }
        for (int i = 0; i < w.points; ++i) {
            const double theta = std::numbers::pi * i / (w.points - 1);
            const double v = theta_wavefunction(ang, qn.N, theta);
            if (jsonl) {
                os << json{{"theta", theta}, {"Theta", v}}.dump() << '\n';
            } else {
                os << format_double(theta) << ',' << format_double(v) << '\n';
            }
        }
        if (w.check_norm) {
            norm = integrate(
                [&](double t) {
                    const double v = theta_wavefunction(ang, qn.N, t);
                    return v * v * std::sin(t);
                },
                0.0, std::numbers::pi, 20, 1e-13);
        }
    } else {
        const RadialEigenfunction chi(eff, lv, qn.n_r, lv.lambda);
        std::optional<SusyGroundState> gs;
        if (w.susy_overlay) {
            gs.emplace(solve_cd(eff, lv.E, lv.lambda));
        }
        const double r_max = w.r_max > 0.0 ? w.r_max : (30.0 + 4.0 * qn.n_r) / (eff.delta * chi.sqrt_c());
        if (!jsonl) {
            os << (gs ? "r,chi,chi_susy,ratio\n" : "r,chi\n");
        }
        for (int i = 1; i <= w.points; ++i) {
            const double r = r_max * i / w.points;
            const double v = chi(r);
            if (jsonl) {
                json row{{"r", r}, {"chi", v}};
                if (gs) {
                    row["chi_susy"] = (*gs)(r);
                    row["ratio"] = (*gs)(r) / v;
                }
                os << row.dump() << '\n';
            } else {
                os << format_double(r) << ',' << format_double(v);
                if (gs) {
                    os << ',' << format_double((*gs)(r)) << ',' << format_double((*gs)(r) / v);
                }
                os << '\n';
            }
        }
        if (w.check_norm) {
            norm = radial_norm_integral(chi);
        }
    }
    if (w.check_norm) {
        if (jsonl) {
            os << json{{"norm", norm}}.dump() << '\n';
        } else {
            os << "# norm," << format_double(norm) << '\n';
        }
    }
    return exit_ok;
}

struct VerifyRow
{
    QuantumNumbers qn;
    double E_nu{0.0}, E_susy{0.0}, E_oracle{0.0};
    int nodes{-1};
    double flatness{0.0};
    std::optional<std::string> error;
    bool empty{false};
};

/// max - min over 100 radii of V2(D_i) - V1(D_{i+1}), worst over i = 0..n_r.
double flatness_for(const PotentialSpec& eff, double E, double lambda, int n_r)
{
    const SusyFactorization base = factorize(eff, E, lambda);
    double worst = 0.0;
    for (int i = 0; i <= n_r; ++i) {
        const SusyFactorization a = base.shifted(i), b = base.shifted(i + 1);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int k = 1; k <= 100; ++k) {
            const double r = 0.05 * k / eff.delta;
            const double d = partner_potentials(a, r).second - partner_potentials(b, r).first;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

int cmd_verify(const Common& c, const std::string& delta_scan, std::ostream& out, std::ostream& err)
{
    const Setup s = resolve(c);
    if (c.route != "auto" || c.exact) {
        throw UsageError("verify runs every route itself; drop --route and --use-exact-centrifugal");
    }
    std::vector<double> deltas;
    if (!delta_scan.empty()) {
        std::stringstream ss(delta_scan);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc{} || ptr != item.data() + item.size() || !(v > 0.0)) {
                throw UsageError("bad --delta-scan entry '" + item + "'");
            }
            deltas.push_back(v);
        }
    }
    const PotentialSpec eff = with_coupling(s.spec, s.coupling);

    std::vector<VerifyRow> rows(s.tuples.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        VerifyRow& row = rows[i];
        row.qn = s.tuples[i];
        try {
            CombinedOptions opt;
            opt.tol = c.tol;
            opt.freeze_lambda = c.freeze;
            const EnergyLevel nu = solve_combined(s.spec, row.qn, s.coupling, opt);
            opt.route = Route::SUSY;
            row.E_nu = nu.E;
            row.E_susy = solve_combined(s.spec, row.qn, s.coupling, opt).E;
            const EnergyLevel ol = solve_ode_energy(eff, row.qn.n_r, nu.lambda, true, {}, nu.E);
            row.E_oracle = ol.E;
            row.nodes = ol.node_count;
            row.flatness = flatness_for(eff, nu.E, nu.lambda, row.qn.n_r);
        } catch (const Error& e) {
            row.empty = is_empty_spectrum(e.kind());
            row.error = e.what();
        }
    });

    Sink sink(c.out_file, out);
    std::ostream& os = *sink;
    bool pass = true;
    double max_susy = 0.0, max_oracle = 0.0, max_flat = 0.0;
    int checked = 0, nodes_ok = 0;
    os << "n_r,N,m,E_nu,E_susy,E_oracle,nu_susy,nu_oracle,nodes,flatness,status\n";
    for (const VerifyRow& r : rows) {
        os << r.qn.n_r << ',' << r.qn.N << ',' << r.qn.m << ',';
        if (r.error) {
            os << ",,,,,,," << (r.empty ? "no bound state" : "error: " + *r.error) << '\n';
            if (!r.empty) {
                pass = false;
            }
            continue;
        }
        const double ds = std::abs(r.E_nu - r.E_susy), dor = std::abs(r.E_nu - r.E_oracle);
        const bool row_ok = ds < 1e-11 && dor < 1e-6 && r.nodes == r.qn.n_r && r.flatness < 1e-9;
        ++checked;
        nodes_ok += r.nodes == r.qn.n_r ? 1 : 0;
        max_susy = std::max(max_susy, ds);
        max_oracle = std::max(max_oracle, dor);
        max_flat = std::max(max_flat, r.flatness);
        pass = pass && row_ok;
        os << format_double(r.E_nu) << ',' << format_double(r.E_susy) << ',' << format_double(r.E_oracle) << ','
           << format_double(ds) << ',' << format_double(dor) << ',' << r.nodes << ',' << format_double(r.flatness)
           << ',' << (row_ok ? "PASS" : "FAIL") << '\n';
    }
    if (checked == 0) {
        os << "# no bound states\n";
    } else {
        os << "# max |E_nu - E_susy| " << format_double(max_susy) << " (< 1e-11)\n";
        os << "# max |E_nu - E_oracle| " << format_double(max_oracle) << " (< 1e-6)\n";
        os << "# max shape-invariance spread " << format_double(max_flat) << " (< 1e-9)\n";
        os << "# node agreement " << nodes_ok << '/' << checked << '\n';
    }

    if (!deltas.empty()) {
        std::sort(deltas.begin(), deltas.end(), std::greater<>());
        // prefer large angular momentum so the centrifugal term matters
        std::vector<QuantumNumbers> order = s.tuples;
        std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            return a.N + std::abs(a.m) > b.N + std::abs(b.m);
        });
        std::optional<QuantumNumbers> chosen;
        std::vector<std::array<double, 3>> table;
        for (const QuantumNumbers& qn : order) {
            table.clear();
            try {
                for (double d : deltas) {
                    PotentialSpec sd = s.spec;
                    sd.delta = d;
                    CombinedOptions opt;
                    opt.tol = c.tol;
                    opt.freeze_lambda = c.freeze;
                    const EnergyLevel nu = solve_combined(sd, qn, s.coupling, opt);
                    const EnergyLevel ex =
                        solve_ode_energy(with_coupling(sd, s.coupling), qn.n_r, nu.lambda, false, {}, nu.E);
                    table.push_back({d, nu.E, ex.E});
                }
                chosen = qn;
                break;
            } catch (const Error&) {
            }
        }
        if (!chosen) {
            os << "# delta scan skipped: no level stays bound at every delta\n";
        } else {
            os << "# delta scan at n_r=" << chosen->n_r << " N=" << chosen->N << " m=" << chosen->m << '\n';
            os << "delta,E_nu,E_exact,abs_err\n";
            bool monotone = true;
            double prev = std::numeric_limits<double>::infinity();
            for (const auto& [d, e_nu, e_ex] : table) {
                const double e = std::abs(e_ex - e_nu);
                monotone = monotone && e < prev;
                prev = e;
                os << format_double(d) << ',' << format_double(e_nu) << ',' << format_double(e_ex) << ','
                   << format_double(e) << '\n';
            }
            os << "# approximation error decreasing with delta: " << (monotone ? "PASS" : "FAIL") << '\n';
            pass = pass && monotone;
        }
    }
    if (!pass) {
        err << "verification failed\n";
    }
    return pass ? exit_ok : exit_failure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Klein-Gordon spectra for Hulthen plus ring-shaped potentials", "kfg"};
    app.require_subcommand(1);

    Common spectrum_opts, wave_opts, verify_opts;
    WaveOptions wave;
    std::string delta_scan;

    auto* spectrum = app.add_subcommand("spectrum", "energy table over quantum-number ranges");
    add_common(spectrum, spectrum_opts);

    auto* wavefunction = app.add_subcommand("wavefunction", "sample chi(r) or Theta(theta) for one level");
    add_common(wavefunction, wave_opts);
    wavefunction->add_option("--grid", wave.grid, "r or theta")->check(CLI::IsMember({"r", "theta"}));
    wavefunction->add_option("--points", wave.points, "number of samples");
    wavefunction->add_option("--r-max", wave.r_max, "outer radius of the r grid");
    wavefunction->add_flag("--check-norm", wave.check_norm, "append the quadrature norm");
    wavefunction->add_flag("--susy-overlay", wave.susy_overlay, "add the SUSY ground state and its ratio");

    auto* verify = app.add_subcommand("verify", "cross-check NU, SUSY and shooting routes");
    add_common(verify, verify_opts);
    verify->add_option("--delta-scan", delta_scan, "comma-separated delta values for the approximation check");
    verify_opts.nr = "0..1";
    verify_opts.N = "0..1";
    verify_opts.m = "0..1";

    std::vector<const char*> argv{"kfg"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (spectrum->parsed()) {
            return cmd_spectrum(spectrum_opts, out, err);
        }
        if (wavefunction->parsed()) {
            return cmd_wavefunction(wave_opts, wave, out, err);
        }
        return cmd_verify(verify_opts, delta_scan, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace kfg::cli
