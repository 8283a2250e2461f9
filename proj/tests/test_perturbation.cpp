#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qhj/ensemble.hpp"
#include "qhj/oracle.hpp"
#include "qhj/perturbation.hpp"

using namespace qhj;

namespace {
constexpr double pi = std::numbers::pi;
const WellModel unit_well = make_well(1.0, 1.0, 1.0);
} // namespace

TEST_CASE("matrix element bracket: limits and variant ratio") {
    const auto tiny = make_impulse(unit_well, 1.0, 1e-6, 0.0, 1.0);
    const double k = unit_well.wave_number();
    const double small = copenhagen_matrix_element(unit_well, tiny, CopenhagenVariant::original);
    CHECK(small == doctest::Approx(k * k * 1e-24 / 6.0).epsilon(1e-3));
    CHECK(small < 5e-25);

    for (double q : {1.0, 2.0, 5.0}) {
        const auto well = make_well(1.0, 1.0, q);
        const auto spec = make_impulse(well, 1.0, 0.1, 0.0, 1.0);
        const double orig = copenhagen_matrix_element(well, spec, CopenhagenVariant::original);
        const double err = copenhagen_matrix_element(well, spec, CopenhagenVariant::errata);
        CHECK(err == orig / q); // exact division, no tolerance
    }
}

TEST_CASE("copenhagen E1 is linear in F and positive for the reference impulse") {
    const auto spec = make_impulse(unit_well, 1.0, 0.1, 0.0, 1.0);
    const auto e = copenhagen_e1(unit_well, spec, CopenhagenVariant::original);
    CHECK(e.e1 > 0.0);
    CHECK(e.e1 == doctest::Approx(4.1e-5).epsilon(0.05));

    const auto zero = make_impulse(unit_well, 0.0, 0.1, 0.0, 1.0);
    CHECK(copenhagen_e1(unit_well, zero, CopenhagenVariant::original).e1 == 0.0);

    const auto neg = make_impulse(unit_well, -1.0, 0.1, 0.0, 1.0);
    CHECK(copenhagen_e1(unit_well, neg, CopenhagenVariant::errata).e1
          == -copenhagen_e1(unit_well, spec, CopenhagenVariant::errata).e1);
}

TEST_CASE("symmetric microstate: the four wall cases are exact") {
    const auto ms = make_microstate(1.0, 1.0, 0.0);
    const auto spec = make_impulse(unit_well, 1.0, 0.1, 0.0, 1.0);
    const double unit = unit_well.hbar * unit_well.wave_number() / unit_well.m; // hbar k / m
    const double hs = 2.0 / pi;

    CHECK(trajectory_e1_case(E1Case::left_wall_plus, unit_well, ms, spec, -0.95 * hs)
          == doctest::Approx(unit).epsilon(1e-14));
    CHECK(trajectory_e1_case(E1Case::right_wall_plus, unit_well, ms, spec, 0.95 * hs)
          == doctest::Approx(-unit).epsilon(1e-14));
    CHECK(trajectory_e1_case(E1Case::right_wall_minus, unit_well, ms, spec, 0.95 * hs)
          == doctest::Approx(unit).epsilon(1e-14));
    CHECK(trajectory_e1_case(E1Case::left_wall_minus, unit_well, ms, spec, -0.95 * hs)
          == doctest::Approx(-unit).epsilon(1e-14));

    CHECK_THROWS_AS(trajectory_e1_case(E1Case::left_wall_plus, unit_well, ms, spec, 0.0), window_error);
    CHECK(trajectory_e1_case(E1Case::interior_zero, unit_well, ms, spec, 0.123) == 0.0);
}

TEST_CASE("full dispatch covers bands, interior, and periodic reduction") {
    const auto ms = make_microstate(1.0, 1.0, 0.0);
    const double hs = 2.0 / pi;
    const double unit = pi / 2.0;

    // gamma in the left band on the +x sheet of the orbit with tau0 = 0.
    auto spec = make_impulse(unit_well, 1.0, 0.1, -0.95 * hs, 1.0);
    auto r = trajectory_e1(unit_well, ms, spec, 0.0);
    CHECK(r.case_id == E1Case::left_wall_plus);
    CHECK(r.e1 == doctest::Approx(unit).epsilon(1e-14));

    // Same phase shifted by whole periods dispatches identically.
    auto far = make_impulse(unit_well, 1.0, 0.1, -0.95 * hs + 7.0 * 4.0 * hs, 1.0);
    auto rf = trajectory_e1(unit_well, ms, far, 0.0);
    CHECK(rf.case_id == E1Case::left_wall_plus);
    CHECK(rf.e1 == doctest::Approx(r.e1).epsilon(1e-12));

    // Mid-well at the impulse: zero transfer while Copenhagen stays finite.
    auto mid = make_impulse(unit_well, 1.0, 0.1, 0.0, 1.0);
    auto rm = trajectory_e1(unit_well, ms, mid, 0.0);
    CHECK(rm.case_id == E1Case::interior_zero);
    CHECK(rm.e1 == 0.0);
    CHECK(copenhagen_e1(unit_well, mid, CopenhagenVariant::original).e1 != 0.0);

    // The -x sheet of the same cycle: right band first, then left.
    auto minus_right = make_impulse(unit_well, 1.0, 0.1, 2.0 * hs - 0.95 * hs, 1.0);
    auto rr = trajectory_e1(unit_well, ms, minus_right, 0.0);
    CHECK(rr.case_id == E1Case::right_wall_minus);
    CHECK(rr.e1 == doctest::Approx(unit).epsilon(1e-14));

    auto minus_left = make_impulse(unit_well, 1.0, 0.1, 2.0 * hs + 0.95 * hs, 1.0);
    auto rl = trajectory_e1(unit_well, ms, minus_left, 0.0);
    CHECK(rl.case_id == E1Case::left_wall_minus);
    CHECK(rl.e1 == doctest::Approx(-unit).epsilon(1e-14));
}

TEST_CASE("E1 is linear in F and T and scale invariant in the microstate") {
    const auto ms = make_microstate(2.0, 3.0, 1.0);
    const auto w = e1_case_window(unit_well, ms, make_impulse(unit_well, 1.0, 0.05, 0.0, 1.0),
                                  E1Case::left_wall_plus);
    const double t = w.lower + 0.6 * (w.upper - w.lower);

    const auto base = make_impulse(unit_well, 1.0, 0.05, 0.0, 1.0);
    const double e_base = trajectory_e1_case(E1Case::left_wall_plus, unit_well, ms, base, t);

    const auto scaled = make_impulse(unit_well, -2.0, 0.05, 0.0, 3.0);
    CHECK(trajectory_e1_case(E1Case::left_wall_plus, unit_well, ms, scaled, t)
          == doctest::Approx(-6.0 * e_base).epsilon(1e-13));

    const auto ms_lam = make_microstate(0.5 * 2.0, 0.5 * 3.0, 0.5 * 1.0);
    CHECK(trajectory_e1_case(E1Case::left_wall_plus, unit_well, ms_lam, base, t)
          == doctest::Approx(e_base).epsilon(1e-10));
}

TEST_CASE("wall cases converge to the symmetric limit linearly") {
    const auto spec = make_impulse(unit_well, 1.0, 0.05, 0.0, 1.0);
    const double limit = pi / 2.0; // F hbar k T / m at unit parameters
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        const auto ms = make_microstate(1.0 + delta, 1.0, 0.0);
        const auto w = e1_case_window(unit_well, ms, spec, E1Case::left_wall_plus);
        const double t = w.lower + 0.5 * (w.upper - w.lower);
        const double e1 = trajectory_e1_case(E1Case::left_wall_plus, unit_well, ms, spec, t);
        CHECK(std::abs(e1 - limit) <= 3.0 * delta);
    }
}

TEST_CASE("closed forms match the finite-difference oracle") {
    auto gen = make_stream(41, 0);
    SamplerParams params;
    for (int trial = 0; trial < 10; ++trial) {
        const auto ms = sample_microstate(gen, params);
        const double eps = 2e-4;
        const auto wspec = make_impulse(unit_well, 1.0, eps, 0.0, 1.0);
        const auto w = e1_case_window(unit_well, ms, wspec, E1Case::left_wall_plus);
        const double t = w.lower + (0.25 + 0.5 * uniform01(gen)) * (w.upper - w.lower);
        const auto spec = make_impulse(unit_well, 1.0, eps, t, 1.0);
        const auto closed = trajectory_e1(unit_well, ms, spec, 0.0);
        REQUIRE(closed.case_id == E1Case::left_wall_plus);
        const double fd = canonical_fd_e1(unit_well, ms, spec, 0.0);
        CHECK(closed.e1 == doctest::Approx(fd).epsilon(1e-5));
    }
}
