#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qhj/errors.hpp"

namespace qhj {

enum class Direction { plus_x, minus_x };

inline const char* to_string(Direction d) {
    return d == Direction::plus_x ? "+x" : "-x";
}

/// Infinitely deep square well on [-q, q] together with the particle
/// constants. The ground state fixes the wave number and energy.
struct WellModel {
    double hbar;
    double m;
    double q;

    double wave_number() const { return std::numbers::pi / (2.0 * q); }
    double ground_energy() const {
        const double k = wave_number();
        return hbar * hbar * k * k / (2.0 * m);
    }
    // Loop integral of the ground-state orbit; E0 == J^2/(32 m q^2).
    double action_variable() const { return 4.0 * q * hbar * wave_number(); }
};

inline WellModel make_well(double hbar, double m, double q) {
    if (!(hbar > 0.0)) throw validation_error("make_well: hbar must be positive, got " + std::to_string(hbar));
    if (!(m > 0.0)) throw validation_error("make_well: m must be positive, got " + std::to_string(m));
    if (!(q > 0.0)) throw validation_error("make_well: q must be positive, got " + std::to_string(q));
    return WellModel{hbar, m, q};
}

/// Coefficient triple (a, b, c) selecting one trajectory of the ground
/// state. All members of the family reproduce the same wave function.
struct Microstate {
    double a;
    double b;
    double c;

    double discriminant() const { return a * b - 0.25 * c * c; }
    // Constant of the motion b/sqrt(ab - c^2/4); sets the orbit period.
    double motion_constant() const { return b / std::sqrt(discriminant()); }
    // Ermakov invariant 1/[a - c^2/(4b)].
    double ermakov_invariant() const { return b / discriminant(); }
};

inline Microstate make_microstate(double a, double b, double c) {
    if (!(a > 0.0)) throw validation_error("make_microstate: a must be positive, got " + std::to_string(a));
    if (!(b > 0.0)) throw validation_error("make_microstate: b must be positive, got " + std::to_string(b));
    const double disc = a * b - 0.25 * c * c;
    if (!(disc > 0.0))
        throw validation_error("make_microstate: ab - c^2/4 must be positive, got " + std::to_string(disc));
    return Microstate{a, b, c};
}

/// Impulsive perturbation: time delta at gamma with integrated measure
/// t_weight, spatial tent of height epsilon confined to the two wall bands.
struct ImpulseSpec {
    double force;    // F
    double epsilon;  // band width, 0 < epsilon < q
    double gamma;    // impulse time
    double t_weight; // integrated delta-function measure
};

inline ImpulseSpec make_impulse(const WellModel& well, double force, double epsilon,
                                double gamma, double t_weight) {
    if (!(epsilon > 0.0) || !(epsilon < well.q))
        throw validation_error("make_impulse: epsilon must lie in (0, q), got " + std::to_string(epsilon));
    if (!(t_weight > 0.0))
        throw validation_error("make_impulse: t_weight must be positive, got " + std::to_string(t_weight));
    return ImpulseSpec{force, epsilon, gamma, t_weight};
}

// The wall-band truncation error grows as epsilon^3; warn past q/10.
inline bool epsilon_outside_recommended(const WellModel& well, const ImpulseSpec& spec) {
    return spec.epsilon > well.q / 10.0;
}

/// Spatial tent profile of the perturbation (no F, no delta factor).
inline double impulse_profile(const WellModel& well, const ImpulseSpec& spec, double x) {
    const double q = well.q;
    if (std::abs(x) > q) return 0.0;
    if (x < -q + spec.epsilon) return -x - q + spec.epsilon;
    if (x > q - spec.epsilon) return x - q + spec.epsilon;
    return 0.0;
}

namespace detail {

// aphi^2 + btheta^2 + cphi theta without the common normalization;
// the trig combination that shapes every trajectory quantity.
inline double shape(const Microstate& ms, double k, double x) {
    const double co = std::cos(k * x), si = std::sin(k * x);
    return ms.a * co * co + ms.b * si * si + ms.c * si * co;
}

inline double shape_d1(const Microstate& ms, double k, double x) {
    return k * (-(ms.a - ms.b) * std::sin(2.0 * k * x) + ms.c * std::cos(2.0 * k * x));
}

inline double shape_d2(const Microstate& ms, double k, double x) {
    return -2.0 * k * k * ((ms.a - ms.b) * std::cos(2.0 * k * x) + ms.c * std::sin(2.0 * k * x));
}

inline void require_interior(const WellModel& well, double x, const char* who) {
    if (std::abs(x) > well.q)
        throw domain_error(std::string(who) + ": |x| exceeds the half-width q, x = " + std::to_string(x));
}

} // namespace detail

} // namespace qhj
