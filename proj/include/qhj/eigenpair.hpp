#pragma once

#include <cmath>
#include <numbers>

#include "qhj/model.hpp"

namespace qhj {

/// Interior eigenfunction pair for one microstate. phi is the symmetric
/// bound solution, theta the antisymmetric unbound partner; both carry the
/// common prefactor that scales their Wronskian to
/// W^2 = 2m/[hbar^2 (ab - c^2/4)].
struct EigenPairContext {
    WellModel well;
    Microstate ms;
    double norm; // (2m/[hbar^2 k^2 (ab - c^2/4)])^(1/4)
};

inline EigenPairContext make_eigenpair_context(const WellModel& well, const Microstate& ms) {
    const double k = well.wave_number();
    const double norm = std::pow(2.0 * well.m / (well.hbar * well.hbar * k * k * ms.discriminant()), 0.25);
    return EigenPairContext{well, ms, norm};
}

inline double phi(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "phi");
    return ctx.norm * std::cos(ctx.well.wave_number() * x);
}

inline double theta(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "theta");
    return ctx.norm * std::sin(ctx.well.wave_number() * x);
}

inline double phi_deriv(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "phi_deriv");
    const double k = ctx.well.wave_number();
    return -ctx.norm * k * std::sin(k * x);
}

inline double theta_deriv(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "theta_deriv");
    const double k = ctx.well.wave_number();
    return ctx.norm * k * std::cos(k * x);
}

/// phi theta' - phi' theta, evaluated from the trig forms (constant in x).
inline double wronskian(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "wronskian");
    return phi(ctx, x) * theta_deriv(ctx, x) - phi_deriv(ctx, x) * theta(ctx, x);
}

/// +-(2m)^(1/2) / (a phi^2 + b theta^2 + c phi theta).
inline double conjugate_momentum(const EigenPairContext& ctx, double x, Direction dir) {
    detail::require_interior(ctx.well, x, "conjugate_momentum");
    const double denom = ctx.norm * ctx.norm * detail::shape(ctx.ms, ctx.well.wave_number(), x);
    const double p = std::sqrt(2.0 * ctx.well.m) / denom;
    return dir == Direction::plus_x ? p : -p;
}

inline bool is_branch_endpoint(const EigenPairContext& ctx, double x) {
    return std::abs(x) == ctx.well.q;
}

/// Hamilton's characteristic function, integration constant zero. At the
/// walls theta/phi diverges; the principal-branch limits +-hbar pi/2 are
/// returned (query is_branch_endpoint to detect the pole).
inline double hamilton_w(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "hamilton_w");
    const auto& ms = ctx.ms;
    if (is_branch_endpoint(ctx, x))
        return std::copysign(ctx.well.hbar * std::numbers::pi / 2.0, x);
    const double ratio = std::tan(ctx.well.wave_number() * x); // theta/phi
    return ctx.well.hbar * std::atan((ms.b * ratio + 0.5 * ms.c) / std::sqrt(ms.discriminant()));
}

/// Rebuilds the Schroedinger wave function from the microstate quantities;
/// equals phi for every valid (a, b, c).
inline double reconstruct_psi(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "reconstruct_psi");
    const auto& ms = ctx.ms;
    const double quad = ctx.norm * ctx.norm * detail::shape(ms, ctx.well.wave_number(), x);
    const double scale = std::sqrt(ms.a - ms.c * ms.c / (4.0 * ms.b));
    return std::sqrt(quad) / scale * std::cos(hamilton_w(ctx, x) / ctx.well.hbar);
}

/// (W')^2/(2m) + V - E + (hbar^2/4m)<W;x> with all derivatives in closed
/// form; identically zero up to roundoff for a valid characteristic function.
inline double qshje_residual(const EigenPairContext& ctx, double x) {
    detail::require_interior(ctx.well, x, "qshje_residual");
    if (is_branch_endpoint(ctx, x))
        throw domain_error("qshje_residual: x must be strictly interior");
    const double k = ctx.well.wave_number();
    const auto& ms = ctx.ms;
    const double g = detail::shape(ms, k, x);
    const double g1 = detail::shape_d1(ms, k, x);
    const double g2 = detail::shape_d2(ms, k, x);
    // W' = hbar k sqrt(D)/g, so <W;x> = g'^2/(2g^2) - g''/g.
    const double w1 = ctx.well.hbar * k * std::sqrt(ms.discriminant()) / g;
    const double schwarzian = 0.5 * (g1 / g) * (g1 / g) - g2 / g;
    return w1 * w1 / (2.0 * ctx.well.m) - ctx.well.ground_energy()
         + ctx.well.hbar * ctx.well.hbar / (4.0 * ctx.well.m) * schwarzian;
}

} // namespace qhj
