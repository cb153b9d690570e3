#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kfg/angular.hpp"
#include "kfg/coupled.hpp"
#include "kfg/errors.hpp"
#include "kfg/json_io.hpp"
#include "kfg/nu_radial.hpp"
#include "kfg/oracle.hpp"
#include "kfg/special_functions.hpp"

using namespace kfg;

namespace {

PotentialSpec spec(double V0, double S0, double delta, double beta = 0.0, double beta_prime = 0.0)
{
    PotentialSpec s;
    s.V0 = V0;
    s.S0 = S0;
    s.delta = delta;
    s.beta = beta;
    s.beta_prime = beta_prime;
    return s;
}

double physical_root(const PotentialSpec& s, int n, double lambda, CouplingCase c, bool positive)
{
    double best = std::nan("");
    for (const EnergyLevel& lv : solve_energies(s, n, lambda, c)) {
        if (!lv.spurious && (lv.E > 0) == positive) {
            best = lv.E;
        }
    }
    return best;
}

} // namespace

TEST_CASE("no ring: one update reproduces the central Hulthen level with l = N + |m|")
{
    const PotentialSpec s = spec(0.1, 0.1, 0.1);
    for (int N = 0; N < 3; ++N) {
        for (int m = 0; m < 2; ++m) {
            for (int n = 0; n < 2; ++n) {
                const EnergyLevel lv = solve_combined(s, {n, N, m}, CouplingCase::VeqS);
                const double l = N + m;
                const double ref = physical_root(s, n, l * (l + 1), CouplingCase::VeqS, lv.E > 0);
                CHECK(lv.iterations == 1);
                CHECK(std::abs(lv.E - ref) < 1e-12);
                CHECK(lv.lambda == doctest::Approx(l * (l + 1)).epsilon(1e-14));
                CHECK(lv.bound);
            }
        }
    }
}

TEST_CASE("combined forms with zeta = 0 equal the central forms")
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto c : {CouplingCase::VneqS, CouplingCase::VeqS, CouplingCase::VeqmS}) {
        for (int k = 0; k < 100; ++k) {
            PotentialSpec s = spec(0.05 + 0.2 * u(rng), 0.0, 0.05 + 0.15 * u(rng));
            s.S0 = s.V0 + 0.1 * u(rng);
            s.C0 = 0.2 * u(rng);
            if (c == CouplingCase::VeqmS) {
                s.V0 = -s.V0;
            }
            const double E = 1.98 * u(rng) - 0.99;
            const int n = k % 3, N = (k / 3) % 4;
            const double a = combined_residual(s, E, n, N, 0, c);
            const double b = energy_residual(with_coupling(s, c), E, n, N * (N + 1.0), c);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("ring case: converged level is a root of the residual at eta(E) and agrees with the oracle")
{
    const PotentialSpec s = spec(0.1, 0.1, 0.1, 0.1, 0.2);
    const PotentialSpec eff = with_coupling(s, CouplingCase::VeqS);
    for (auto qn : {QuantumNumbers{0, 0, 0}, QuantumNumbers{1, 1, 1}, QuantumNumbers{0, 2, 0}}) {
        CombinedOptions opt;
        const EnergyLevel lv = solve_combined(s, qn, CouplingCase::VeqS, opt);
        CHECK(lv.iterations > 1);
        CHECK(lv.lambda == doctest::Approx(eta_of_energy(eff, lv.E, qn.N, qn.m)).epsilon(1e-14));
        const auto g = [&](double E) { return energy_residual(eff, E, qn.n_r, eta_of_energy(eff, E, qn.N, qn.m), CouplingCase::VeqS); };
        const double h = 1e-6;
        const double slope = (g(lv.E + h) - g(lv.E - h)) / (2 * h);
        CHECK(std::abs(g(lv.E)) < 10.0 * opt.tol * std::abs(slope));

        const EnergyLevel ol = solve_ode_energy(eff, qn.n_r, lv.lambda, true, {}, lv.E);
        CHECK(std::abs(ol.E - lv.E) < 1e-6);
    }
}

TEST_CASE("SUSY route converges to the same level")
{
    const PotentialSpec s = spec(0.1, 0.25, 0.1, 0.05, 0.1);
    CombinedOptions su;
    su.route = Route::SUSY;
    for (int n = 0; n < 2; ++n) {
        const EnergyLevel a = solve_combined(s, {n, 1, 1}, CouplingCase::VneqS);
        const EnergyLevel b = solve_combined(s, {n, 1, 1}, CouplingCase::VneqS, su);
        CHECK(std::abs(a.E - b.E) < 1e-11);
        CHECK(b.route == Route::SUSY);
    }
}

TEST_CASE("binding grows with V0 when V = S")
{
    double prev = -1.0;
    for (int k = 0; k <= 10; ++k) {
        const PotentialSpec s = spec(0.08 + 0.02 * k, 0.0, 0.1, 0.05, 0.1);
        const EnergyLevel lv = solve_combined(s, {0, 1, 1}, CouplingCase::VeqS);
        const double binding = s.M * s.M - lv.E * lv.E;
        CHECK(binding >= prev);
        prev = binding;
    }
}

TEST_CASE("both energy branches are reported when both exist")
{
    const PotentialSpec s = spec(0.1, 0.25, 0.1, 0.05, 0.1);
    const auto levels = solve_combined_branches(s, {0, 0, 1}, CouplingCase::VneqS);
    REQUIRE(levels.size() == 2);
    CHECK(levels[0].E > 0.0);
    CHECK(levels[1].E < 0.0);
    CombinedOptions neg;
    neg.branch = Branch::Negative;
    CHECK(solve_combined(s, {0, 0, 1}, CouplingCase::VneqS, neg).E == levels[1].E);
}

TEST_CASE("frozen lambda evaluates eta at E = M")
{
    const PotentialSpec s = spec(0.1, 0.1, 0.1, 0.1, 0.2);
    CombinedOptions opt;
    opt.freeze_lambda = true;
    const EnergyLevel lv = solve_combined(s, {0, 1, 1}, CouplingCase::VeqS, opt);
    const double eta_m = eta_of_energy(s, s.M, 1, 1);
    CHECK(lv.lambda == eta_m);
    CHECK(lv.iterations == 1);
    CHECK(std::abs(lv.E - physical_root(with_coupling(s, CouplingCase::VeqS), 0, eta_m, CouplingCase::VeqS, true)) < 1e-12);
    CHECK(lv.E != solve_combined(s, {0, 1, 1}, CouplingCase::VeqS).E);
}

TEST_CASE("non-convergence reports the iterate history")
{
    const PotentialSpec s = spec(0.1, 0.1, 0.1, 0.1, 0.2);
    CombinedOptions opt;
    opt.max_iter = 3;
    try {
        solve_combined(s, {0, 0, 0}, CouplingCase::VeqS, opt);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.kind() == ErrorKind::ConvergenceFailure);
        REQUIRE(e.history().size() == 4);
        CHECK(e.history().front() == doctest::Approx(s.M * (1 - 1e-3)));
    }
}

TEST_CASE("ring that is infeasible for every energy")
{
    const PotentialSpec s = spec(0.1, 0.1, 0.1, 0.9, 0.0);
    try {
        solve_combined(s, {0, 0, 0}, CouplingCase::VeqS);
        FAIL("expected InfeasibleRing");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleRing);
    }
}

TEST_CASE("no binding potential, no level")
{
    try {
        solve_combined(spec(0, 0, 0.1), {0, 0, 0}, CouplingCase::VeqS);
        FAIL("expected NoBoundState");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoBoundState);
    }
}

TEST_CASE("existence: beta <= beta' never restricts m")
{
    for (double bp : {0.2, 0.5}) {
        const PotentialSpec s = spec(0.1, 0.1, 0.1, 0.2, bp);
        for (double E : {-0.9, 0.0, 0.9}) {
            EnergyLevel lv;
            lv.E = E;
            lv.coupling = CouplingCase::VeqS;
            lv.qn.m = 0;
            CHECK(existence_check(s, lv, 0, 2.0).ring_ok);
        }
    }
}

TEST_CASE("existence: ring flag flips at beta = beta' + m^2 / gamma")
{
    const double E = 0.4, gamma = 2.0 * (E + 1.0);
    for (int m : {0, 1, 2}) {
        const double beta_star = 0.1 + m * m / gamma;
        EnergyLevel lv;
        lv.E = E;
        lv.coupling = CouplingCase::VeqS;
        lv.qn.m = m;
        auto flag = [&](double beta) { return existence_check(spec(0.1, 0.1, 0.1, beta, 0.1), lv, 0, 2.0).ring_ok; };
        double lo = 0.0, hi = 5.0;
        REQUIRE(flag(lo));
        REQUIRE(!flag(hi));
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            const double mid = 0.5 * (lo + hi);
            (flag(mid) ? lo : hi) = mid;
        }
        CHECK(std::abs(lo - beta_star) < 1e-12);
        // the angular solver switches to InfeasibleRing at the same point
        CHECK_NOTHROW(solve_angular(spec(0.1, 0.1, 0.1, beta_star - 1e-9, 0.1), E, m, 0));
        CHECK_THROWS_AS(solve_angular(spec(0.1, 0.1, 0.1, beta_star + 1e-9, 0.1), E, m, 0), Error);
    }
}

TEST_CASE("existence: a dominant eta C0 term removes the level")
{
    PotentialSpec s = spec(0.1, 0.1, 0.1);
    s.C0 = 1.0;
    EnergyLevel lv;
    lv.E = 0.5;
    lv.coupling = CouplingCase::VeqS;
    const double eta = 12.0;
    const ExistenceFlags f = existence_check(s, lv, 0, eta);
    CHECK(!f.radial_ok);
    CHECK(!f.bound());
    CHECK(energy_rhs(with_coupling(s, CouplingCase::VeqS), lv.E, 0, eta, CouplingCase::VeqS) < 0.0);
}

TEST_CASE("existence: radial flag flips where the predicted M^2 - E^2 changes sign (scan in V0)")
{
    const double E = 0.6, eta = 2.0;
    EnergyLevel lv;
    lv.E = E;
    lv.coupling = CouplingCase::VeqS;
    auto rhs = [&](double V0) {
        const PotentialSpec s = with_coupling(spec(V0, 0, 0.1), CouplingCase::VeqS);
        return energy_rhs_general(s, E, 0, eta);
    };
    // first V0 on the physical branch where the prediction turns positive
    double lo = 0.0, hi = 0.0;
    for (int k = 1; k < 200 && hi == 0.0; ++k) {
        const double v = 0.001 + k * 0.0005;
        const PotentialSpec s = with_coupling(spec(v, 0, 0.1), CouplingCase::VeqS);
        if (nu_bracket(nu_parameters(s, E, eta), 0) > 0.0 && rhs(v) > 0.0) {
            hi = v;
            lo = v - 0.0005;
        }
    }
    REQUIRE(hi > 0.0);
    REQUIRE(rhs(lo) < 0.0);
    const double v_star = find_root_bracketed(rhs, lo, hi, 1e-15);
    auto flag = [&](double V0) { return existence_check(spec(V0, 0, 0.1), lv, 0, eta).radial_ok; };
    CHECK(!flag(v_star - 1e-9));
    CHECK(flag(v_star + 1e-9));
    CHECK(rhs(v_star - 1e-9) < 0.0);
    CHECK(rhs(v_star + 1e-9) > 0.0);
}

TEST_CASE("combined level JSON carries quantum numbers and iterations")
{
    const EnergyLevel lv = solve_combined(spec(0.1, 0.1, 0.1, 0.1, 0.2), {1, 1, 1}, CouplingCase::VeqS);
    const json j = lv;
    CHECK(j.at("N") == 1);
    CHECK(j.at("m") == 1);
    CHECK(j.at("iterations") == lv.iterations);
    CHECK(j.at("flags") == json::array({"bound"}));
}
