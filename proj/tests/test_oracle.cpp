#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qhj/oracle.hpp"
#include "qhj/perturbation.hpp"

using namespace qhj;

namespace {
constexpr double pi = std::numbers::pi;
const WellModel unit_well = make_well(1.0, 1.0, 1.0);
} // namespace

TEST_CASE("quadrature rules agree with each other and with exact integrals") {
    auto f = [](double x) { return x * x * x - 2.0 * x + 1.0; };
    QuadratureSpec simpson;
    QuadratureSpec gauss;
    gauss.rule = QuadratureRule::gauss_legendre;
    const double exact = 0.25 * 16.0 - 4.0 + 2.0; // integral over [0, 2]
    CHECK(integrate(f, 0.0, 2.0, simpson) == doctest::Approx(exact).epsilon(1e-13));
    CHECK(integrate(f, 0.0, 2.0, gauss) == doctest::Approx(exact).epsilon(1e-13));

    auto osc = [](double x) { return std::cos(7.0 * x) * std::exp(-x); };
    const double a = integrate(osc, 0.0, 3.0, simpson);
    const double b = integrate(osc, 0.0, 3.0, gauss);
    CHECK(std::abs(a - b) <= 2e-12);
}

TEST_CASE("matrix element quadrature certifies the closed-form bracket") {
    QuadratureSpec quad;
    const auto spec = make_impulse(unit_well, 1.0, 0.1, 0.0, 1.0);
    const double numeric = matrix_element_quadrature(unit_well, spec, quad);
    const double closed = copenhagen_matrix_element(unit_well, spec, CopenhagenVariant::original);
    CHECK(numeric == doctest::Approx(closed).epsilon(1e-10));

    const auto spec2 = make_impulse(unit_well, 1.0, 0.2, 0.0, 1.0);
    const double ratio = matrix_element_quadrature(unit_well, spec2, quad) / numeric;
    CHECK(std::abs(ratio - 16.0) / 16.0 < 0.05); // leading order scales as eps^4

    ImpulseSpec empty = spec;
    empty.epsilon = 0.0; // bypass the constructor to probe the degenerate support
    CHECK(matrix_element_quadrature(unit_well, empty, quad) == 0.0);
}

TEST_CASE("brute-force inversion of the equation of motion") {
    TrajectoryClock sym(unit_well, make_microstate(1.0, 1.0, 0.0), 0.0);
    CHECK(invert_eom_bruteforce(sym, 0.5 / (pi / 2.0), Direction::plus_x)
          == doctest::Approx(0.5).epsilon(1e-11));

    TrajectoryClock gen(unit_well, make_microstate(2.0, 3.0, 1.0), 0.0);
    for (double t_frac : {-0.8, -0.3, 0.1, 0.6, 0.95}) {
        const double t = t_frac * gen.half_sheet_time();
        const double x = invert_eom_bruteforce(gen, t, Direction::plus_x);
        CHECK(exact_time_of_position(gen, x, Direction::plus_x) == doctest::Approx(t).epsilon(1e-11));
        const double x_minus = invert_eom_bruteforce(gen, -t, Direction::minus_x);
        CHECK(x_minus == doctest::Approx(x).epsilon(1e-9));
    }

    // Near the wall the truncated reversion agrees to cubic order.
    TrajectoryClock tilt(unit_well, make_microstate(1.0, 1.0, 0.5), 0.0);
    const double eps = 0.05;
    const double t = exact_time_of_position(tilt, -1.0 + eps / 2.0, Direction::plus_x);
    const double exact = invert_eom_bruteforce(tilt, t, Direction::plus_x);
    CHECK(std::abs(revert_position(tilt, t, eps) - exact) < 10.0 * eps * eps * eps);

    CHECK_THROWS_AS(invert_eom_bruteforce(sym, 10.0, Direction::plus_x), numerical_error);
}

TEST_CASE("finite-difference energy transfer oracle") {
    const auto ms = make_microstate(1.0, 1.0, 0.0);
    const double hs = 2.0 / pi;
    const auto spec = make_impulse(unit_well, 1.0, 0.1, -0.95 * hs, 1.0);
    CHECK(canonical_fd_e1(unit_well, ms, spec, 0.0) == doctest::Approx(pi / 2.0).epsilon(1e-6));

    // A skewed microstate checked against the dispatched closed form.
    const auto skew = make_microstate(2.0, 3.0, 1.0);
    const auto w = e1_case_window(unit_well, skew, make_impulse(unit_well, 1.0, 2e-4, 0.0, 1.0),
                                  E1Case::left_wall_plus);
    const auto spec2 = make_impulse(unit_well, 1.0, 2e-4, 0.5 * (w.lower + w.upper), 1.0);
    const auto closed = trajectory_e1(unit_well, skew, spec2, 0.0);
    REQUIRE(closed.case_id == E1Case::left_wall_plus);
    CHECK(canonical_fd_e1(unit_well, skew, spec2, 0.0) == doctest::Approx(closed.e1).epsilon(1e-5));

    // Central differences are second order: quartering the error when h halves.
    const auto w2 = e1_case_window(unit_well, skew, make_impulse(unit_well, 1.0, 0.1, 0.0, 1.0),
                                   E1Case::left_wall_plus);
    const auto wide = make_impulse(unit_well, 1.0, 0.1, 0.5 * (w2.lower + w2.upper), 1.0);
    const double ref = canonical_fd_e1(unit_well, skew, wide, 0.0, 1e-6);
    const double err1 = std::abs(canonical_fd_e1(unit_well, skew, wide, 0.0, 1e-3) - ref);
    const double err2 = std::abs(canonical_fd_e1(unit_well, skew, wide, 0.0, 5e-4) - ref);
    CHECK(err1 / err2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("convergence-order fitting") {
    CHECK(fit_convergence_order({{0.1, 1e-3}, {0.05, 1.25e-4}, {0.025, 1.5625e-5}})
          == doctest::Approx(3.0).epsilon(0.02));
    CHECK_THROWS_AS(fit_convergence_order({{0.1, 1e-3}, {0.05, 1e-4}}), validation_error);
    CHECK_THROWS_AS(fit_convergence_order({{0.1, 1e-3}, {0.1, 1e-4}, {0.05, 1e-5}}), validation_error);
    CHECK_THROWS_AS(fit_convergence_order({{0.1, 1e-3}, {0.05, -1e-4}, {0.025, 1e-5}}), validation_error);
}
