#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "qhj/model.hpp"

namespace qhj {

/// State of the trajectory at one instant.
struct ParticleSnapshot {
    double x;
    Direction direction;
    double sheet_epoch; // tau valid on the current Riemann sheet
    std::int64_t cycle_index;
};

/// Time bookkeeping for one microstate's orbit. The +x sheet carries the
/// particle from -q to q with t - tau = f(x); the wall reflection jumps to
/// the -x sheet and shifts the epoch by 2mq/(hbar k G).
class TrajectoryClock {
public:
    TrajectoryClock(const WellModel& well, const Microstate& ms, double tau0)
        : well_(well), ms_(ms), tau0_(tau0),
          motion_constant_(ms.motion_constant()),
          half_sheet_(well.m * well.q / (well.hbar * well.wave_number() * motion_constant_)) {}

    const WellModel& well() const { return well_; }
    const Microstate& microstate() const { return ms_; }
    double tau0() const { return tau0_; }
    double motion_constant() const { return motion_constant_; }

    // t - tau at the wall contacts; one sheet lasts 2 mq/(hbar k G).
    double half_sheet_time() const { return half_sheet_; }
    double sheet_duration() const { return 2.0 * half_sheet_; }
    double period() const { return 4.0 * half_sheet_; }

    // Epoch of the -x sheet within the cycle starting at tau0.
    double tau_minus() const { return tau0_ + sheet_duration(); }

private:
    WellModel well_;
    Microstate ms_;
    double tau0_;
    double motion_constant_;
    double half_sheet_;
};

/// t - tau as a function of position on the chosen sheet:
/// +-2(mx/hbar k) sqrt(ab - c^2/4) / [a + b + (a-b)cos(2kx) + c sin(2kx)].
inline double exact_time_of_position(const TrajectoryClock& clock, double x, Direction dir) {
    detail::require_interior(clock.well(), x, "exact_time_of_position");
    const WellModel& w = clock.well();
    const double k = w.wave_number();
    const double t = (w.m * x / (w.hbar * k)) * std::sqrt(clock.microstate().discriminant())
                   / detail::shape(clock.microstate(), k, x);
    return dir == Direction::plus_x ? t : -t;
}

namespace detail {

// Quadratic reversion near a wall, +x-direction convention. Left band
// (x = -q + xi): A xi^2 - B xi + C = 0; right band (x = q - eta):
// A eta^2 + B eta + C2 = 0. Both share
//   A = ((a-b)/b) k^2,  B(T) = (c/b) k + m/(hbar k G T),
//   C(T) = 1 + mq/(hbar k G T),  C2(T) = 1 - mq/(hbar k G T).
struct WallQuadratic {
    double A, B, C;
    double B_dot, C_dot; // d/dT
};

enum class WallSide { left, right };

inline WallQuadratic wall_quadratic(const TrajectoryClock& clock, WallSide side, double t_minus_tau) {
    const WellModel& w = clock.well();
    const Microstate& ms = clock.microstate();
    const double k = w.wave_number();
    const double G = clock.motion_constant();
    const double u = w.m / (w.hbar * k * G * t_minus_tau);
    const double u_dot = -u / t_minus_tau;
    WallQuadratic qd;
    qd.A = (ms.a - ms.b) / ms.b * k * k;
    qd.B = ms.c / ms.b * k + u;
    qd.B_dot = u_dot;
    if (side == WallSide::left) {
        qd.C = 1.0 + w.q * u;
        qd.C_dot = w.q * u_dot;
    } else {
        qd.C = 1.0 - w.q * u;
        qd.C_dot = -w.q * u_dot;
    }
    return qd;
}

// Distance from the wall, picked as the root that vanishes at wall contact.
// Written in the division form that stays stable through a -> b, where the
// quadratic degenerates to the linear C/B solution.
inline double wall_root(const WallQuadratic& qd, WallSide side, const char* who) {
    const double radicand = qd.B * qd.B - 4.0 * qd.A * qd.C;
    if (radicand < 0.0)
        throw degeneracy_error(std::string(who) + ": negative radicand " + std::to_string(radicand));
    const double r = std::sqrt(radicand);
    const double denom = side == WallSide::left ? qd.B - r : qd.B + r;
    if (denom == 0.0)
        throw degeneracy_error(std::string(who) + ": vanishing root denominator");
    return side == WallSide::left ? 2.0 * qd.C / denom : -2.0 * qd.C / denom;
}

// d(root)/dT by implicit differentiation; valid for both bands.
inline double wall_root_rate(const WallQuadratic& qd, WallSide side, const char* who) {
    const double root = wall_root(qd, side, who);
    if (side == WallSide::left) {
        const double denom = 2.0 * qd.A * root - qd.B;
        if (denom == 0.0) throw degeneracy_error(std::string(who) + ": stationary quadratic");
        return (qd.B_dot * root - qd.C_dot) / denom;
    }
    const double denom = 2.0 * qd.A * root + qd.B;
    if (denom == 0.0) throw degeneracy_error(std::string(who) + ": stationary quadratic");
    return -(qd.B_dot * root + qd.C_dot) / denom;
}

// Denominator of Eq-of-motion with the trig functions expanded to second
// order about the wall; xi is the distance from the wall.
inline double wall_shape(const Microstate& ms, double k, WallSide side, double xi) {
    const double csign = side == WallSide::left ? -1.0 : 1.0;
    return ms.b + csign * ms.c * k * xi + (ms.a - ms.b) * k * k * xi * xi;
}

} // namespace detail

/// Maclaurin-truncated t - tau near the -q wall for +x motion, discarding
/// O((x+q)^3) in the trig expansion.
inline double wall_series_time(const TrajectoryClock& clock, double x, double band_width) {
    const WellModel& w = clock.well();
    const double xi = x + w.q;
    if (xi < 0.0 || xi > band_width)
        throw domain_error("wall_series_time: x is outside the wall band, x+q = " + std::to_string(xi));
    const double k = w.wave_number();
    const Microstate& ms = clock.microstate();
    return (w.m * x / (w.hbar * k)) * std::sqrt(ms.discriminant())
         / detail::wall_shape(ms, k, detail::WallSide::left, xi);
}

/// Validity window of the truncated reversion in the left band for +x
/// motion, as (wall contact, inner crossing] in t - tau.
inline std::pair<double, double> reversion_window(const TrajectoryClock& clock, double band_width) {
    const WellModel& w = clock.well();
    const double k = w.wave_number();
    const double G = clock.motion_constant();
    const double inner = -w.m * (w.q - band_width)
                       / (w.hbar * k * G
                          * (detail::wall_shape(clock.microstate(), k, detail::WallSide::left, band_width)
                             / clock.microstate().b));
    return {-clock.half_sheet_time(), inner};
}

/// Inverts the truncated equation of motion in the left band (+x motion):
/// the quadratic root that meets the wall as t - tau -> -mq/(hbar k G).
/// Exact wall contact is accepted; the stable root form returns -q there.
inline double revert_position(const TrajectoryClock& clock, double t_minus_tau, double band_width) {
    const auto [lo, hi] = reversion_window(clock, band_width);
    if (!(t_minus_tau >= lo) || !(t_minus_tau <= hi))
        throw window_error("revert_position: t - tau = " + std::to_string(t_minus_tau)
                           + " outside window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const auto qd = detail::wall_quadratic(clock, detail::WallSide::left, t_minus_tau);
    return detail::wall_root(qd, detail::WallSide::left, "revert_position") - clock.well().q;
}

/// True when t(x) is strictly increasing across the +x sheet, i.e. the
/// trajectory never runs retrograde. Scanned on a fine grid; the exact
/// condition is g - x g' > 0 on [-q, q].
inline bool trajectory_is_monotone(const WellModel& well, const Microstate& ms, int grid = 2001) {
    const double k = well.wave_number();
    for (int i = 0; i < grid; ++i) {
        const double x = -well.q + 2.0 * well.q * i / (grid - 1);
        if (detail::shape(ms, k, x) - x * detail::shape_d1(ms, k, x) <= 0.0) return false;
    }
    return true;
}

namespace detail {

// Reduces t to sheet-local coordinates. On the +x sheet, s is t - tau_plus
// in [-h, h); on the -x sheet, s is t - tau_minus in [-h, h).
struct SheetLocalTime {
    Direction direction;
    double s;
    double sheet_epoch;
    std::int64_t cycle_index;
};

inline SheetLocalTime reduce_to_sheet(const TrajectoryClock& clock, double t_query) {
    const double h = clock.half_sheet_time();
    const double period = clock.period();
    const double raw = t_query - (clock.tau0() - h);
    double r = std::fmod(raw, period);
    if (r < 0.0) r += period;
    const auto cycle = static_cast<std::int64_t>(std::floor(raw / period));
    if (r < 2.0 * h)
        return {Direction::plus_x, r - h, clock.tau0() + static_cast<double>(cycle) * period, cycle};
    return {Direction::minus_x, r - 3.0 * h,
            clock.tau0() + static_cast<double>(cycle) * period + clock.sheet_duration(), cycle};
}

} // namespace detail

/// Solves the exact equation of motion for the position at t_query.
/// Bracketed bisection refined by secant steps; requires a monotone
/// trajectory (use trajectory_is_monotone to screen microstates).
inline ParticleSnapshot locate_particle(const TrajectoryClock& clock, double t_query,
                                        double x_tol = 1e-12, int max_iter = 200) {
    const auto local = detail::reduce_to_sheet(clock, t_query);
    // On either sheet the target satisfies f(x) = s with the +x sign of f.
    const double target = local.direction == Direction::plus_x ? local.s : -local.s;
    const WellModel& w = clock.well();
    auto resid = [&](double x) { return exact_time_of_position(clock, x, Direction::plus_x) - target; };

    double lo = -w.q, hi = w.q;
    double flo = resid(lo), fhi = resid(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw numerical_error("locate_particle: bracket failure at t = " + std::to_string(t_query)
                              + " (sheet " + to_string(local.direction) + ")");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        if (hi - lo <= x_tol) break;
        // Secant proposal, accepted only when it stays inside the bracket.
        double cand = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
        const double fc = resid(cand);
        if (fc == 0.0) { lo = hi = cand; }
        else if (fc < 0.0) { lo = cand; flo = fc; }
        else { hi = cand; fhi = fc; }
        x = 0.5 * (lo + hi);
        if (it == max_iter - 1 && hi - lo > x_tol)
            throw numerical_error("locate_particle: no convergence after " + std::to_string(max_iter)
                                  + " iterations, bracket width " + std::to_string(hi - lo));
    }
    return ParticleSnapshot{x, local.direction, local.sheet_epoch, local.cycle_index};
}

} // namespace qhj
