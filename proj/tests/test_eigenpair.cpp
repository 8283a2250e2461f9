#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qhj/eigenpair.hpp"
#include "qhj/rng.hpp"

using namespace qhj;

namespace {

constexpr double pi = std::numbers::pi;

EigenPairContext unit_ctx(double a, double b, double c) {
    return make_eigenpair_context(make_well(1.0, 1.0, 1.0), make_microstate(a, b, c));
}

Microstate random_ms(std::mt19937_64& gen) {
    const double a = std::exp(uniform_in(gen, std::log(0.2), std::log(5.0)));
    const double c = uniform_in(gen, -1.0, 1.0) * 2.0 * std::sqrt(a) * 0.95;
    return make_microstate(a, 1.0, c);
}

} // namespace

TEST_CASE("eigenfunction values at reference points") {
    const auto ctx = unit_ctx(1.0, 1.0, 0.0);
    const double norm = std::pow(8.0 / (pi * pi), 0.25);
    CHECK(phi(ctx, 0.0) == doctest::Approx(norm).epsilon(1e-14));
    CHECK(std::abs(phi(ctx, 1.0)) < 1e-15);
    CHECK(std::abs(phi(ctx, -1.0)) < 1e-15);
    CHECK(theta(ctx, 1.0) == doctest::Approx(norm).epsilon(1e-14));
    CHECK(theta(ctx, 0.0) == 0.0);
    CHECK(theta(ctx, 0.5) == doctest::Approx(norm * std::sin(pi / 4)).epsilon(1e-14));
    CHECK_THROWS_AS(phi(ctx, 1.5), domain_error);
    CHECK_THROWS_AS(theta(ctx, -1.01), domain_error);
}

TEST_CASE("wronskian normalization and constancy") {
    const auto sym = unit_ctx(1.0, 1.0, 0.0);
    const double w0 = wronskian(sym, 0.0);
    CHECK(w0 * w0 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(wronskian(sym, 0.7) == doctest::Approx(w0).epsilon(1e-13));

    const auto ctx = unit_ctx(2.0, 3.0, 1.0);
    for (double x : {-0.9, -0.2, 0.0, 0.55, 0.99}) {
        const double w = wronskian(ctx, x);
        CHECK(w * w == doctest::Approx(8.0 / 23.0).epsilon(1e-13));
    }
}

TEST_CASE("conjugate momentum reduces to the plane-wave value and matches dW/dx") {
    const auto sym = unit_ctx(1.0, 1.0, 0.0);
    CHECK(conjugate_momentum(sym, 0.0, Direction::plus_x) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(conjugate_momentum(sym, 0.0, Direction::minus_x) == doctest::Approx(-pi / 2).epsilon(1e-14));

    const auto ctx = unit_ctx(2.0, 3.0, 1.0);
    const double h = 1e-6;
    for (double x : {0.3, -0.55, 0.8}) {
        const double fd = (hamilton_w(ctx, x + h) - hamilton_w(ctx, x - h)) / (2.0 * h);
        CHECK(conjugate_momentum(ctx, x, Direction::plus_x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("characteristic function branch behavior") {
    const auto sym = unit_ctx(1.0, 1.0, 0.0);
    CHECK(hamilton_w(sym, 0.0) == 0.0);
    CHECK(hamilton_w(sym, 1.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(hamilton_w(sym, -1.0) == doctest::Approx(-pi / 2).epsilon(1e-15));
    CHECK(is_branch_endpoint(sym, 1.0));
    CHECK_FALSE(is_branch_endpoint(sym, 0.999));

    // W is continuous up to the wall from inside.
    CHECK(hamilton_w(sym, 0.999999) == doctest::Approx(pi / 2).epsilon(1e-5));
}

TEST_CASE("wave function reconstruction returns phi") {
    const struct { double a, b, c, x; } cases[] = {
        {1.0, 1.0, 0.0, 0.25},
        {2.0, 3.0, 1.0, 0.8},
        {5.0, 0.5, -1.0, -0.6},
    };
    for (const auto& cs : cases) {
        const auto ctx = unit_ctx(cs.a, cs.b, cs.c);
        CHECK(std::abs(reconstruct_psi(ctx, cs.x) - phi(ctx, cs.x)) <= 1e-12);
    }

    auto gen = make_stream(21, 0);
    const auto well = make_well(1.0, 1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto ctx = make_eigenpair_context(well, random_ms(gen));
        for (int j = 0; j < 101; ++j) {
            const double x = -1.0 + 2.0 * (j + 0.5) / 101.0;
            CHECK(std::abs(reconstruct_psi(ctx, x) - phi(ctx, x)) <= 1e-12);
        }
    }
}

TEST_CASE("quadratic form stays positive inside the well") {
    auto gen = make_stream(22, 0);
    for (int i = 0; i < 50; ++i) {
        const auto ms = random_ms(gen);
        for (int j = 0; j < 101; ++j) {
            const double x = -1.0 + 2.0 * j / 100.0;
            CHECK(detail::shape(ms, pi / 2, x) > 0.0);
        }
    }
}

TEST_CASE("stationary Hamilton-Jacobi residual vanishes") {
    CHECK(std::abs(qshje_residual(unit_ctx(1.0, 1.0, 0.0), 0.1)) <= 1e-10);
    CHECK(std::abs(qshje_residual(unit_ctx(3.0, 2.0, 1.0), -0.4)) <= 1e-10);

    const auto sym = unit_ctx(1.0, 1.0, 0.0);
    double worst = 0.0;
    for (int j = 0; j < 101; ++j) {
        const double x = -1.0 + 2.0 * (j + 0.5) / 101.0;
        worst = std::max(worst, std::abs(qshje_residual(sym, x)));
    }
    CHECK(worst < 1e-9);

    auto gen = make_stream(23, 0);
    for (int i = 0; i < 20; ++i) {
        const auto ctx = make_eigenpair_context(make_well(1.0, 1.0, 1.0), random_ms(gen));
        for (int j = 0; j < 101; ++j) {
            const double x = -1.0 + 2.0 * (j + 0.5) / 101.0;
            CHECK(std::abs(qshje_residual(ctx, x)) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(qshje_residual(sym, 1.0), domain_error);
}
