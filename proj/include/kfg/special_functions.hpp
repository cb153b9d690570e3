#pragma once

#include <functional>
#include <vector>

namespace kfg {

/// Gauss-Legendre rule on [-1, 1].
struct Quadrature
{
    std::vector<double> nodes;   ///< strictly increasing abscissae in (-1, 1)
    std::vector<double> weights; ///< positive, summing to 2
    int order{0};
};

/// Builds (and caches per thread) the `order`-point Gauss-Legendre rule.
const Quadrature& gauss_legendre(int order);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence in n.
double jacobi_poly(int n, double a, double b, double x);

/// 2F1(-n, b; c; x), summed term by term. Throws Domain if c hits a pole before the series stops.
double hyp2f1_terminating(int n, double b, double c, double x);

/// Adaptive composite Gauss-Legendre integral of `f` over [lo, hi].
///
/// Each panel is compared against its two halves and split until the
/// difference falls below `rel_tol` of the running total (or `abs_tol`).
double integrate(const std::function<double(double)>& f, double lo, double hi, int order = 20,
                 double rel_tol = 1e-10, double abs_tol = 1e-300);

/// Root of `g` in [lo, hi] given g(lo) * g(hi) < 0.
///
/// Illinois-style secant steps with a bisection fallback; the bracket is kept
/// at every iteration and the result satisfies bracket width <= tol.
/// Throws NoBracket when the endpoint signs agree.
double find_root_bracketed(const std::function<double(double)>& g, double lo, double hi,
                           double tol = 1e-12, int max_iter = 400);

/// All sign-change roots of `g` on a uniform `points`-sample grid of [lo, hi], each
/// refined with find_root_bracketed. Grid points where g is not finite are skipped.
std::vector<double> bracket_roots(const std::function<double(double)>& g, double lo, double hi,
                                  int points, double tol = 1e-12);

} // namespace kfg
