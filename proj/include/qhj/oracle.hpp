#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qhj/kinematics.hpp"

namespace qhj {

enum class QuadratureRule { adaptive_simpson, gauss_legendre };

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::adaptive_simpson;
    double abs_tol = 1e-12;
    int max_depth = 40;
};

namespace oracle_detail {

inline double simpson(const std::function<double(double)>& f, double a, double fa,
                      double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                                   double b, double fb, double m, double fm, double whole,
                                   double tol, int depth, int max_depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw quadrature_error("adaptive_simpson: tolerance not reached at depth "
                               + std::to_string(max_depth));
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, max_depth)
         + adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, max_depth);
}

// 10-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the
// rule is symmetric).
constexpr double gl_x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                            0.8650633666889845, 0.9739065285171717};
constexpr double gl_w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                            0.1494513491505806, 0.0666713443086881};

inline double gauss10(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i)
        s += gl_w[i] * (f(c - h * gl_x[i]) + f(c + h * gl_x[i]));
    return s * h;
}

inline double gauss_composite(const std::function<double(double)>& f, double a, double b, int panels) {
    double s = 0.0;
    for (int i = 0; i < panels; ++i)
        s += gauss10(f, a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels);
    return s;
}

} // namespace oracle_detail

/// Integrates f over [a, b] to abs_tol with the requested rule. The
/// Gauss-Legendre path doubles the panel count until two successive
/// composites agree.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& quad) {
    if (!(quad.abs_tol > 0.0)) throw validation_error("integrate: abs_tol must be positive");
    if (a == b) return 0.0;
    if (quad.rule == QuadratureRule::adaptive_simpson) {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fb = f(b), fm = f(m);
        const double whole = oracle_detail::simpson(f, a, fa, b, fb, m, fm);
        return oracle_detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole,
                                                   quad.abs_tol, 0, quad.max_depth);
    }
    double prev = oracle_detail::gauss_composite(f, a, b, 1);
    int panels = 2;
    for (int d = 0; d < quad.max_depth; ++d, panels *= 2) {
        const double cur = oracle_detail::gauss_composite(f, a, b, panels);
        if (std::abs(cur - prev) <= quad.abs_tol) return cur;
        prev = cur;
    }
    throw quadrature_error("gauss_legendre: tolerance not reached at depth "
                           + std::to_string(quad.max_depth));
}

/// Spatial matrix-element factor by direct numerical integration of
/// (1/q) cos^2(kx) times the tent profile over the two wall bands. The
/// wave function is evaluated from scratch here, on purpose, so this
/// shares no code with the closed-form bracket.
inline double matrix_element_quadrature(const WellModel& well, const ImpulseSpec& spec,
                                        const QuadratureSpec& quad) {
    if (spec.epsilon == 0.0) return 0.0;
    const double k = std::acos(-1.0) / (2.0 * well.q);
    auto integrand = [&](double x) {
        const double c = std::cos(k * x);
        return c * c / well.q * impulse_profile(well, spec, x);
    };
    const double left = integrate(integrand, -well.q, -well.q + spec.epsilon, quad);
    const double right = integrate(integrand, well.q - spec.epsilon, well.q, quad);
    return left + right;
}

/// Reference inversion of the exact equation of motion: plain bisection
/// on [-q, q] to 1e-13, with the equation evaluated from its own trig
/// expression rather than through the library's shape helpers.
inline double invert_eom_bruteforce(const TrajectoryClock& clock, double t_minus_tau,
                                    Direction direction) {
    const WellModel& w = clock.well();
    const Microstate& ms = clock.microstate();
    const double k = std::acos(-1.0) / (2.0 * w.q);
    const double root_disc = std::sqrt(ms.a * ms.b - 0.25 * ms.c * ms.c);
    auto eom = [&](double x) {
        const double co = std::cos(k * x), si = std::sin(k * x);
        const double t = (w.m * x / (w.hbar * k)) * root_disc
                       / (ms.a * co * co + ms.b * si * si + ms.c * si * co);
        return direction == Direction::plus_x ? t : -t;
    };
    double lo = -w.q, hi = w.q;
    double flo = eom(lo) - t_minus_tau, fhi = eom(hi) - t_minus_tau;
    if (direction == Direction::minus_x) { std::swap(lo, hi); std::swap(flo, fhi); }
    if (flo > 0.0 || fhi < 0.0)
        throw numerical_error("invert_eom_bruteforce: t - tau = " + std::to_string(t_minus_tau)
                              + " is outside the " + std::string(to_string(direction))
                              + " sheet's span");
    while (std::abs(hi - lo) > 1e-13) {
        const double m = 0.5 * (lo + hi);
        if (eom(m) - t_minus_tau < 0.0) lo = m; else hi = m;
    }
    return 0.5 * (lo + hi);
}

/// Finite-difference evaluation of the canonical first-order energy
/// transfer: E1 = F T d/d(tau0) of the tent profile at the exact particle
/// position when the impulse fires. Uses central differences and the
/// brute-force inversion, so it checks the closed-form wall cases without
/// touching them.
inline double canonical_fd_e1(const WellModel& well, const Microstate& ms, const ImpulseSpec& spec,
                              double tau0, double fd_step = 1e-7) {
    if (!(fd_step > 0.0)) throw validation_error("canonical_fd_e1: fd_step must be positive");
    auto tent_at = [&](double tau) {
        TrajectoryClock clock(well, ms, tau);
        const auto local = detail::reduce_to_sheet(clock, spec.gamma);
        const double target = local.direction == Direction::plus_x ? local.s : -local.s;
        const double x = invert_eom_bruteforce(clock, target, Direction::plus_x);
        return impulse_profile(well, spec, x);
    };
    const double d = (tent_at(tau0 + fd_step) - tent_at(tau0 - fd_step)) / (2.0 * fd_step);
    return spec.force * spec.t_weight * d;
}

/// Least-squares slope of log(err) against log(h); the measured order of
/// a truncation whose error scales as h^p.
inline double fit_convergence_order(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw validation_error("fit_convergence_order: need at least 3 (h, err) points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double prev_h = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [h, err] = points[i];
        if (!(h > 0.0) || !(err > 0.0))
            throw validation_error("fit_convergence_order: h and err must be positive");
        if (i > 0 && !(h < prev_h))
            throw validation_error("fit_convergence_order: h must be strictly decreasing");
        prev_h = h;
        const double x = std::log(h), y = std::log(err);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw validation_error("fit_convergence_order: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

} // namespace qhj
