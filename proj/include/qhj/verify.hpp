#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qhj/eigenpair.hpp"
#include "qhj/ensemble.hpp"
#include "qhj/oracle.hpp"

namespace qhj {

struct VerifyResult {
    std::string group;
    bool passed;
    std::string detail; // worst-offender diagnostics on failure
};

namespace verify_detail {

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

inline std::vector<Microstate> random_microstates(int count, std::uint64_t seed, bool monotone_only) {
    const WellModel screen = make_well(1.0, 1.0, 1.0);
    auto gen = make_stream(seed, 0);
    std::vector<Microstate> out;
    SamplerParams params;
    while (static_cast<int>(out.size()) < count) {
        if (monotone_only) {
            out.push_back(sample_microstate(gen, params));
        } else {
            const double a = std::exp(uniform_in(gen, std::log(params.a_min), std::log(params.a_max)));
            const double c = uniform_in(gen, -2.0 * std::sqrt(a) * params.rho, 2.0 * std::sqrt(a) * params.rho);
            out.push_back(make_microstate(a, 1.0, c));
        }
    }
    (void)screen;
    return out;
}

struct Worst {
    double value = 0.0;
    std::string where;
    void consider(double v, const std::string& w) {
        if (v > value) { value = v; where = w; }
    }
};

inline VerifyResult report(const std::string& group, const Worst& worst, double bound,
                           const std::string& metric) {
    std::ostringstream os;
    os << metric << " = " << worst.value << " (bound " << bound << ")";
    if (!worst.where.empty()) os << " at " << worst.where;
    return {group, worst.value <= bound, os.str()};
}

inline std::string ms_tag(const Microstate& ms) {
    std::ostringstream os;
    os << "(a=" << ms.a << ", b=" << ms.b << ", c=" << ms.c << ")";
    return os.str();
}

} // namespace verify_detail

/// Wave-function reconstruction: the microstate quantities rebuild phi
/// itself for every (a, b, c).
inline VerifyResult verify_psi_reconstruction(const WellModel& well, int n_ms = 100, int n_grid = 101) {
    verify_detail::Worst worst;
    for (const auto& ms : verify_detail::random_microstates(n_ms, 11, false)) {
        const auto ctx = make_eigenpair_context(well, ms);
        for (int i = 0; i < n_grid; ++i) {
            const double x = -well.q + 2.0 * well.q * (i + 0.5) / n_grid;
            worst.consider(std::abs(reconstruct_psi(ctx, x) - phi(ctx, x)), verify_detail::ms_tag(ms));
        }
    }
    return verify_detail::report("psi_reconstruction", worst, 1e-12, "max |psi - phi|");
}

/// Wronskian magnitude matches 2m/[hbar^2 (ab - c^2/4)] and is constant
/// across the well.
inline VerifyResult verify_wronskian(const WellModel& well, int n_ms = 100, int n_grid = 1001) {
    verify_detail::Worst worst;
    for (const auto& ms : verify_detail::random_microstates(n_ms, 12, false)) {
        const auto ctx = make_eigenpair_context(well, ms);
        const double want = 2.0 * well.m / (well.hbar * well.hbar * ms.discriminant());
        std::vector<double> values(n_grid);
        double sum = 0.0;
        for (int i = 0; i < n_grid; ++i) {
            const double x = -well.q + 2.0 * well.q * i / (n_grid - 1);
            const double w = wronskian(ctx, x);
            values[i] = w;
            sum += w;
            worst.consider(verify_detail::rel_err(w * w, want), verify_detail::ms_tag(ms));
        }
        const double mean = sum / n_grid;
        double var = 0.0; // two-pass variance, safe against cancellation
        for (double w : values) var += (w - mean) * (w - mean);
        var /= n_grid;
        worst.consider(std::sqrt(var) / std::abs(mean), verify_detail::ms_tag(ms) + " [constancy]");
    }
    return verify_detail::report("wronskian", worst, 1e-10, "max rel dev");
}

/// Stationary Hamilton-Jacobi residual vanishes in closed form.
inline VerifyResult verify_qshje(const WellModel& well, int n_ms = 20, int n_grid = 201) {
    verify_detail::Worst worst;
    for (const auto& ms : verify_detail::random_microstates(n_ms, 13, false)) {
        const auto ctx = make_eigenpair_context(well, ms);
        for (int i = 0; i < n_grid; ++i) {
            const double x = -well.q + 2.0 * well.q * (i + 0.5) / n_grid;
            worst.consider(std::abs(qshje_residual(ctx, x)) / well.ground_energy(),
                           verify_detail::ms_tag(ms));
        }
    }
    return verify_detail::report("qshje", worst, 1e-9, "max |residual| / E0");
}

/// Closed-form matrix-element bracket against direct quadrature, plus the
/// exact 1/q relation between the two variants.
inline VerifyResult verify_copenhagen(const WellModel& well) {
    verify_detail::Worst worst;
    for (double eps : {0.01, 0.05, 0.1, 0.3}) {
        const auto spec = make_impulse(well, 1.0, eps * well.q, 0.0, 1.0);
        const double closed = copenhagen_matrix_element(well, spec, CopenhagenVariant::errata);
        QuadratureSpec quad;
        quad.abs_tol = closed * 1e-12; // relative target
        quad.max_depth = 60;
        const double numeric = matrix_element_quadrature(well, spec, quad);
        worst.consider(verify_detail::rel_err(closed, numeric), "eps=" + std::to_string(eps));
        const double orig = copenhagen_matrix_element(well, spec, CopenhagenVariant::original);
        worst.consider(std::abs(closed - orig / well.q), "variant ratio, eps=" + std::to_string(eps));
    }
    return verify_detail::report("copenhagen", worst, 1e-10, "max rel err vs quadrature");
}

/// Kinematics round trips: locate_particle against the exact equation of
/// motion, and the truncated wall reversion against brute-force inversion.
inline VerifyResult verify_kinematics(const WellModel& well) {
    verify_detail::Worst worst;
    for (const auto& ms : verify_detail::random_microstates(10, 14, true)) {
        TrajectoryClock clock(well, ms, 0.0);
        for (int i = 1; i < 40; ++i) {
            const double t = -0.5 * clock.period() + clock.period() * i / 40.0;
            const auto snap = locate_particle(clock, t);
            const double back = snap.sheet_epoch
                              + exact_time_of_position(clock, snap.x, snap.direction);
            // Round-trip residual, held to 5e-9 of a period by the scaling.
            worst.consider(std::abs(back - t) / clock.period() / 1e-10, verify_detail::ms_tag(ms));
        }
        const double eps = 0.02 * well.q;
        const auto [lo, hi] = reversion_window(clock, eps);
        for (int i = 1; i <= 8; ++i) {
            const double t = lo + (hi - lo) * i / 9.0;
            const double approx = revert_position(clock, t, eps);
            const double exact = invert_eom_bruteforce(clock, t, Direction::plus_x);
            // Truncation error is cubic in the band width.
            worst.consider(std::abs(approx - exact) / (eps * eps * eps),
                           verify_detail::ms_tag(ms) + " [reversion]");
        }
    }
    return verify_detail::report("kinematics", worst, 50.0, "max scaled error");
}

/// Wall-case energy transfer: exact symmetric branch, linearity, scale
/// invariance, and agreement with the finite-difference oracle.
inline VerifyResult verify_perturbation(const WellModel& well) {
    verify_detail::Worst worst;
    const double k = well.wave_number();
    const double unit = well.hbar * k / well.m;

    {
        const auto ms = make_microstate(1.0, 1.0, 0.0);
        const auto spec = make_impulse(well, 1.25, 0.1 * well.q, 0.0, 2.0);
        const double hs = well.m * well.q / (well.hbar * k);
        const double want = spec.force * spec.t_weight * unit;
        const struct { E1Case c; double t; double sign; } cases[] = {
            {E1Case::left_wall_plus, -0.97 * hs, 1.0},
            {E1Case::right_wall_plus, 0.97 * hs, -1.0},
            {E1Case::right_wall_minus, 0.97 * hs, 1.0},
            {E1Case::left_wall_minus, -0.97 * hs, -1.0},
        };
        for (const auto& cs : cases) {
            const double e1 = trajectory_e1_case(cs.c, well, ms, spec, cs.t);
            worst.consider(std::abs(e1 - cs.sign * want) / want,
                           std::string("symmetric ") + to_string(cs.c));
        }
    }

    auto gen = make_stream(15, 0);
    SamplerParams params;
    for (int trial = 0; trial < 8; ++trial) {
        const auto ms = sample_microstate(gen, params);
        const double eps = 0.02 * well.q;
        const double eps_fd = 0.004 * well.q;
        const auto spec = make_impulse(well, 1.0, eps, 0.0, 1.0);
        // Pick t inside the narrower window so both band widths accept it.
        const auto w = e1_case_window(well, ms, make_impulse(well, 1.0, eps_fd, 0.0, 1.0),
                                      E1Case::left_wall_plus);
        const double t = w.lower + (w.upper - w.lower) * (0.2 + 0.6 * uniform01(gen));
        const double closed = trajectory_e1_case(E1Case::left_wall_plus, well, ms, spec, t);

        const auto spec2 = make_impulse(well, -3.0, eps, 0.0, 0.5);
        const double scaled = trajectory_e1_case(E1Case::left_wall_plus, well, ms, spec2, t);
        worst.consider(verify_detail::rel_err(scaled, closed * (-3.0) * 0.5), "linearity");

        const auto ms_scaled = make_microstate(2.5 * ms.a, 2.5 * ms.b, 2.5 * ms.c);
        const double invariant = trajectory_e1_case(E1Case::left_wall_plus, well, ms_scaled, spec, t);
        worst.consider(verify_detail::rel_err(invariant, closed), "scale invariance");

        // Oracle check through the general dispatch: gamma sits at t past
        // the +x sheet epoch of the orbit started at tau0 = 0. The narrow
        // band keeps the quadratic truncation below the 1e-4 allowance.
        const auto spec3 = make_impulse(well, 1.0, eps_fd, t, 1.0);
        const auto dispatched = trajectory_e1(well, ms, spec3, 0.0);
        worst.consider(dispatched.case_id == E1Case::left_wall_plus ? 0.0 : 1.0, "dispatch case");
        const double fd = canonical_fd_e1(well, ms, spec3, 0.0);
        worst.consider(verify_detail::rel_err(dispatched.e1, fd) / 1e4, "fd oracle");
    }
    return verify_detail::report("perturbation", worst, 1e-8, "max scaled deviation");
}

/// Ensemble determinism and bookkeeping at small n.
inline VerifyResult verify_ensemble(const WellModel& well) {
    verify_detail::Worst worst;
    EnsembleSpec spec;
    spec.n_samples = 20000;
    spec.rng_seed = 99;
    spec.impulse = make_impulse(well, 1.0, 0.1 * well.q, 0.0, 1.0);
    spec.source = MicrostateSource::fixed(make_microstate(1.0, 1.0, 0.0));
    const auto r1 = run_ensemble(spec, well, 1);
    const auto r2 = run_ensemble(spec, well, 3);
    worst.consider(r1.mean_e1 == r2.mean_e1 && r1.stderr_e1 == r2.stderr_e1 ? 0.0 : 1.0,
                   "thread determinism");
    std::uint64_t total = 0;
    for (auto c : r1.case_histogram) total += c;
    worst.consider(total == r1.n ? 0.0 : 1.0, "histogram total");
    worst.consider(std::abs(r1.mean_e1) <= 4.0 * r1.stderr_e1 ? 0.0 : 1.0, "null mean");
    return verify_detail::report("ensemble", worst, 0.0, "failures");
}

/// Runs every group whose name contains `filter` (all groups when the
/// filter is empty).
inline std::vector<VerifyResult> run_verify(const WellModel& well, const std::string& filter = "") {
    std::vector<VerifyResult> out;
    auto want = [&](const std::string& name) {
        return filter.empty() || name.find(filter) != std::string::npos;
    };
    if (want("psi_reconstruction")) out.push_back(verify_psi_reconstruction(well));
    if (want("wronskian")) out.push_back(verify_wronskian(well));
    if (want("qshje")) out.push_back(verify_qshje(well));
    if (want("copenhagen")) out.push_back(verify_copenhagen(well));
    if (want("kinematics")) out.push_back(verify_kinematics(well));
    if (want("perturbation")) out.push_back(verify_perturbation(well));
    if (want("ensemble")) out.push_back(verify_ensemble(well));
    return out;
}

} // namespace qhj
