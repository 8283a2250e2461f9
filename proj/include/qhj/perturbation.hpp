#pragma once

#include <cmath>

#include "qhj/kinematics.hpp"

namespace qhj {

enum class CopenhagenVariant { original, errata };

inline const char* to_string(CopenhagenVariant v) {
    return v == CopenhagenVariant::original ? "original" : "errata";
}

namespace detail {

// u - sin(u); the direct difference loses most digits for small u, so a
// Maclaurin series takes over below 0.1.
inline double u_minus_sin(double u) {
    if (std::abs(u) >= 0.1) return u - std::sin(u);
    double term = u * u * u / 6.0;
    double sum = term;
    for (int n = 1; n < 10; ++n) {
        term *= -u * u / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        sum += term;
        if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace detail

/// First-order matrix element of the impulse in the ground state. The
/// original form is the bare bracket eps^2/2 - [1 - cos(2 k eps)]/(4 k^2);
/// the errata form carries the extra 1/q from the wave-function
/// normalization. Evaluated as (u - sin u)(u + sin u)/(2 k^2) with
/// u = k eps, which is algebraically identical but free of the severe
/// cancellation the printed form suffers at small eps.
inline double copenhagen_matrix_element(const WellModel& well, const ImpulseSpec& spec,
                                        CopenhagenVariant variant) {
    const double k = well.wave_number();
    const double u = k * spec.epsilon;
    const double bracket = detail::u_minus_sin(u) * (u + std::sin(u)) / (2.0 * k * k);
    return variant == CopenhagenVariant::original ? bracket : bracket / well.q;
}

struct CopenhagenE1 {
    double matrix_element;
    double e1;
    CopenhagenVariant variant;
};

/// E1 = F * matrix_element * t_weight; the integrated delta measure is
/// applied identically to both variants so they stay commensurable with
/// the trajectory result.
inline CopenhagenE1 copenhagen_e1(const WellModel& well, const ImpulseSpec& spec,
                                  CopenhagenVariant variant) {
    const double me = copenhagen_matrix_element(well, spec, variant);
    return CopenhagenE1{me, spec.force * me * spec.t_weight, variant};
}

enum class E1Case { left_wall_plus, right_wall_plus, right_wall_minus, left_wall_minus, interior_zero };

inline const char* to_string(E1Case c) {
    switch (c) {
        case E1Case::left_wall_plus: return "left_wall_plus";
        case E1Case::right_wall_plus: return "right_wall_plus";
        case E1Case::right_wall_minus: return "right_wall_minus";
        case E1Case::left_wall_minus: return "left_wall_minus";
        default: return "interior_zero";
    }
}

/// Validity interval in the sheet-local time argument; endpoint
/// membership depends on the case, see e1_window_contains.
struct TimeWindow {
    double lower;
    double upper;
};

struct TrajectoryE1 {
    double e1;
    E1Case case_id;
    TimeWindow window;
};

namespace detail {

// Sheet-local time at which the +x particle crosses the inner band edge
// |x| = q - eps, from the truncated equation of motion. Negative for the
// left band, positive for the right.
inline double band_crossing_time(const WellModel& w, const Microstate& ms, double eps, WallSide side) {
    const double k = w.wave_number();
    const double wfac = wall_shape(ms, k, side, eps) / ms.b;
    if (!(wfac > 0.0))
        throw degeneracy_error("band_crossing_time: truncated shape is nonpositive at the band edge");
    const double t = w.m * (w.q - eps) / (w.hbar * k * ms.motion_constant() * wfac);
    return side == WallSide::left ? -t : t;
}

inline double half_sheet_time(const WellModel& w, const Microstate& ms) {
    return w.m * w.q / (w.hbar * w.wave_number() * ms.motion_constant());
}

} // namespace detail

/// Window of the given case in the sheet-local time T, where T = gamma -
/// tau on the +x sheet and T = tau_minus - gamma on the -x sheet. The
/// interior case gets the complement interval between the band crossings.
inline TimeWindow e1_case_window(const WellModel& well, const Microstate& ms,
                                 const ImpulseSpec& spec, E1Case case_id) {
    const double hs = detail::half_sheet_time(well, ms);
    switch (case_id) {
        case E1Case::left_wall_plus:
        case E1Case::left_wall_minus:
            return {-hs, detail::band_crossing_time(well, ms, spec.epsilon, detail::WallSide::left)};
        case E1Case::right_wall_plus:
        case E1Case::right_wall_minus:
            return {detail::band_crossing_time(well, ms, spec.epsilon, detail::WallSide::right), hs};
        default:
            return {detail::band_crossing_time(well, ms, spec.epsilon, detail::WallSide::left),
                    detail::band_crossing_time(well, ms, spec.epsilon, detail::WallSide::right)};
    }
}

/// Endpoint policy: left bands are open at the wall and closed at the
/// inner edge; the right band is open-open for +x motion and closed at
/// the inner edge for -x motion. Exact wall contact lands in no band.
inline bool e1_window_contains(E1Case case_id, const TimeWindow& w, double t) {
    switch (case_id) {
        case E1Case::left_wall_plus:
        case E1Case::left_wall_minus:
            return t > w.lower && t <= w.upper;
        case E1Case::right_wall_plus:
            return t > w.lower && t < w.upper;
        case E1Case::right_wall_minus:
            return t >= w.lower && t < w.upper;
        default:
            return t > w.lower && t < w.upper;
    }
}

/// Closed-form E1 for one case. gamma_minus_tau is the sheet-local time
/// argument (see e1_case_window). E1 is F * t_weight times the rate of
/// change of the reverted wall distance with that argument; the sign
/// encodes whether the particle moves with or against the impulse slope.
inline double trajectory_e1_case(E1Case case_id, const WellModel& well, const Microstate& ms,
                                 const ImpulseSpec& spec, double gamma_minus_tau) {
    if (case_id == E1Case::interior_zero) return 0.0;
    const TimeWindow w = e1_case_window(well, ms, spec, case_id);
    if (!e1_window_contains(case_id, w, gamma_minus_tau))
        throw window_error(std::string("trajectory_e1_case: argument ") + std::to_string(gamma_minus_tau)
                           + " outside the " + to_string(case_id) + " window ["
                           + std::to_string(w.lower) + ", " + std::to_string(w.upper) + "]");
    TrajectoryClock clock(well, ms, 0.0);
    const bool left = case_id == E1Case::left_wall_plus || case_id == E1Case::left_wall_minus;
    const bool plus = case_id == E1Case::left_wall_plus || case_id == E1Case::right_wall_plus;
    const auto side = left ? detail::WallSide::left : detail::WallSide::right;
    const auto qd = detail::wall_quadratic(clock, side, gamma_minus_tau);
    const double rate = detail::wall_root_rate(qd, side, to_string(case_id));
    // Left band: E1 = +-F T d(xi)/dT; right band: E1 = +-F T d(eta)/dT.
    // The -x sheet flips the sign because its argument runs backward in t.
    return (plus ? 1.0 : -1.0) * spec.force * spec.t_weight * rate;
}

/// Full dispatch for arbitrary gamma: reduce gamma to the containing
/// sheet of the orbit started at tau0, form the sheet-local argument and
/// pick the band (or interior) window it falls in. Window membership is
/// decided analytically, never by root-finding.
inline TrajectoryE1 trajectory_e1(const WellModel& well, const Microstate& ms,
                                  const ImpulseSpec& spec, double tau0) {
    TrajectoryClock clock(well, ms, tau0);
    const auto local = detail::reduce_to_sheet(clock, spec.gamma);
    const bool plus = local.direction == Direction::plus_x;
    // gamma - tau_plus on the +x sheet, tau_minus - gamma on the -x sheet.
    const double t = plus ? local.s : -local.s;

    const E1Case left_case = plus ? E1Case::left_wall_plus : E1Case::left_wall_minus;
    const TimeWindow wl = e1_case_window(well, ms, spec, left_case);
    if (e1_window_contains(left_case, wl, t))
        return {trajectory_e1_case(left_case, well, ms, spec, t), left_case, wl};

    const E1Case right_case = plus ? E1Case::right_wall_plus : E1Case::right_wall_minus;
    const TimeWindow wr = e1_case_window(well, ms, spec, right_case);
    if (e1_window_contains(right_case, wr, t))
        return {trajectory_e1_case(right_case, well, ms, spec, t), right_case, wr};

    return {0.0, E1Case::interior_zero, TimeWindow{wl.upper, wr.lower}};
}

} // namespace qhj
