#include "kfg/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "kfg/errors.hpp"

namespace kfg {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::NotBound: return "NotBound";
        case ErrorKind::UnsupportedRegime: return "UnsupportedRegime";
        case ErrorKind::NoBracket: return "NoBracket";
        case ErrorKind::InfeasibleRing: return "InfeasibleRing";
        case ErrorKind::NoNormalizableGroundState: return "NoNormalizableGroundState";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::OracleFailure: return "OracleFailure";
        case ErrorKind::NoBoundState: return "NoBoundState";
    }
    return "Error";
}

namespace {

Quadrature build_gauss_legendre(int order)
{
    Quadrature q;
    q.order = order;
    q.nodes.resize(order);
    q.weights.resize(order);
    if (order == 1) {
        q.nodes[0] = 0.0;
        q.weights[0] = 2.0;
        return q;
    }
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = -x;
        q.nodes[order - 1 - i] = x;
        q.weights[i] = w;
        q.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) {
        q.nodes[order / 2] = 0.0;
    }
    return q;
}

double panel(const std::function<double(double)>& f, double lo, double hi, const Quadrature& q)
{
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (int i = 0; i < q.order; ++i) {
        sum += q.weights[i] * f(mid + half * q.nodes[i]);
    }
    return sum * half;
}

double adapt(const std::function<double(double)>& f, double lo, double hi, double whole,
             const Quadrature& q, double tol, int depth)
{
    double mid = 0.5 * (lo + hi);
    double left = panel(f, lo, mid, q);
    double right = panel(f, mid, hi, q);
    double halves = left + right;
    if (std::abs(halves - whole) <= tol || depth >= 40 || !(mid > lo && mid < hi)) {
        return halves;
    }
    return adapt(f, lo, mid, left, q, tol, depth + 1) + adapt(f, mid, hi, right, q, tol, depth + 1);
}

} // namespace

const Quadrature& gauss_legendre(int order)
{
    if (order < 1) {
        raise(ErrorKind::Domain, "quadrature order must be positive");
    }
    thread_local std::map<int, Quadrature> cache;
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, build_gauss_legendre(order)).first;
    }
    return it->second;
}

double log_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        raise(ErrorKind::Domain, "log_gamma requires a finite positive argument");
    }
    return std::lgamma(x);
}

double jacobi_poly(int n, double a, double b, double x)
{
    if (n < 0) {
        raise(ErrorKind::Domain, "jacobi_poly degree must be nonnegative");
    }
    if (n == 0) {
        return 1.0;
    }
    double p_prev = 1.0;
    double p = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    return p;
}

double hyp2f1_terminating(int n, double b, double c, double x)
{
    if (n < 0) {
        raise(ErrorKind::Domain, "hyp2f1_terminating needs n >= 0");
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < n; ++k) {
        const double denom = (c + k) * (k + 1.0);
        if (denom == 0.0) {
            raise(ErrorKind::Domain, "2F1 lower parameter hits a pole before termination");
        }
        term *= (-n + k) * (b + k) * x / denom;
        sum += term;
    }
    return sum;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, int order,
                 double rel_tol, double abs_tol)
{
    if (!(lo < hi)) {
        raise(ErrorKind::Domain, "integrate requires lo < hi");
    }
    const Quadrature& q = gauss_legendre(order);
    constexpr int coarse_panels = 8;
    const double width = (hi - lo) / coarse_panels;
    double magnitude = 0.0;
    std::array<double, coarse_panels> parts{};
    for (int i = 0; i < coarse_panels; ++i) {
        parts[i] = panel(f, lo + i * width, lo + (i + 1) * width, q);
        magnitude += std::abs(parts[i]);
    }
    const double tol = std::max(abs_tol, rel_tol * magnitude) / coarse_panels;
    double total = 0.0;
    for (int i = 0; i < coarse_panels; ++i) {
        const double a = lo + i * width;
        const double b = (i + 1 == coarse_panels) ? hi : a + width;
        total += adapt(f, a, b, parts[i], q, tol, 0);
    }
    return total;
}

double find_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol,
                           int max_iter)
{
    double a = lo, b = hi;
    double fa = g(a), fb = g(b);
    if (fa == 0.0) {
        return a;
    }
    if (fb == 0.0) {
        return b;
    }
    if (!(std::signbit(fa) != std::signbit(fb)) || !std::isfinite(fa) || !std::isfinite(fb)) {
        raise(ErrorKind::NoBracket, "no sign change on the supplied bracket");
    }
    int side = 0;
    double width_checkpoint = std::abs(b - a);
    for (int it = 0; it < max_iter; ++it) {
        const double width = std::abs(b - a);
        if (width <= tol) {
            break;
        }
        double x;
        if (it % 3 == 2 && width > 0.5 * width_checkpoint) {
            x = 0.5 * (a + b);
        } else {
            x = (a * fb - b * fa) / (fb - fa);
            if (!(x > std::min(a, b) && x < std::max(a, b))) {
                x = 0.5 * (a + b);
            }
        }
        if (it % 3 == 2) {
            width_checkpoint = width;
        }
        const double fx = g(x);
        if (fx == 0.0) {
            return x;
        }
        if (std::signbit(fx) == std::signbit(fb)) {
            b = x;
            fb = fx;
            if (side == -1) {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if (side == +1) {
                fb *= 0.5;
            }
            side = +1;
        }
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

std::vector<double> bracket_roots(const std::function<double(double)>& g, double lo, double hi,
                                  int points, double tol)
{
    if (points < 2 || !(lo < hi)) {
        raise(ErrorKind::Domain, "bracket_roots needs at least two samples on a nonempty interval");
    }
    std::vector<double> roots;
    const double step = (hi - lo) / (points - 1);
    double x_prev = lo;
    double g_prev = g(lo);
    for (int i = 1; i < points; ++i) {
        const double x = (i + 1 == points) ? hi : lo + i * step;
        const double gx = g(x);
        if (std::isfinite(gx) && std::isfinite(g_prev)) {
            if (gx == 0.0) {
                roots.push_back(x);
            } else if (g_prev != 0.0 && std::signbit(gx) != std::signbit(g_prev)) {
                roots.push_back(find_root_bracketed(g, x_prev, x, tol));
            }
        }
        x_prev = x;
        g_prev = gx;
    }
    return roots;
}

} // namespace kfg
