#include <doctest.h>

#include <array>
#include <cmath>

#include "fracmoc/verify.hpp"
#include "oracles.hpp"

using namespace fracmoc;
using expr::parse;

namespace {

ScalarFn poly(double p) {
    return ScalarFn([p](double x) { return std::pow(x, p); },
                    [p](double x) { return p == 0.0 ? 0.0 : p * std::pow(x, p - 1.0); });
}

ScalarFn sine() {
    return ScalarFn([](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
}

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("summary statistics skip missing entries") {
    ResidualReport r;
    r.field = Field(linspace(0.0, 1.0, 2), linspace(0.0, 1.0, 2));
    r.field.values << 3.0, -4.0, std::numeric_limits<double>::quiet_NaN(), 0.0;
    summarize(r);
    CHECK(r.max_abs == 4.0);
    CHECK(std::abs(r.l2 - std::sqrt(25.0 / 3.0)) < 1e-15);
    CHECK(r.points_skipped == 1);
}

TEST_CASE("fractional residual of a classical transport solution") {
    const auto prob = transport_problem(Order(1.0), Order(1.0), 1.0, parse("sin(x)"), {0.0, 3.0, 0.0, 1.0});
    const auto sol = solve_constant_coeff(prob, parse("sin(z)"));
    const auto report = residual_fpde(sol, prob, linspace(1.2, 2.8, 11), linspace(0.1, 0.9, 11),
                                      ResidualMethod::Quadrature);
    CHECK(report.points_skipped == 0);
    CHECK(report.max_abs <= 1e-6);
    CHECK(report.l2 <= report.max_abs);
    CHECK(report.method == ResidualMethod::Quadrature);
    CHECK_THROWS_AS(residual_fpde(sol, prob, linspace(1.0, 2.0, 2), linspace(0.1, 0.9, 2),
                                  ResidualMethod::TransformedClassical),
                    DomainError);
}

TEST_CASE("fractional residual of the linear-profile transport solution") {
    // u = X - 2T solves D^1_t u + 2 D^0.5_x u = 0 exactly.
    const auto prob = transport_problem(Order(1.0), Order(0.5), 2.0, parse("x"), {0.0, 6.0, 0.0, 1.0});
    const auto sol = solve_constant_coeff(prob, parse("z"));
    const auto report = residual_fpde(sol, prob, linspace(0.5, 5.5, 6), linspace(0.1, 0.9, 5),
                                      ResidualMethod::Quadrature);
    CHECK(report.points_skipped == 0);
    CHECK(report.max_abs <= 1e-4);
}

TEST_CASE("GL residual tracks the quadrature residual") {
    const auto prob = transport_problem(Order(0.5), Order(0.5), 1.0, parse("x"), {0.0, 4.0, 0.0, 1.0});
    const auto sol = solve_constant_coeff(prob, parse("z"));
    ResidualOptions opts;
    opts.gl_step = 1e-3;
    const auto gl = residual_fpde(sol, prob, linspace(1.0, 3.0, 3), linspace(0.5, 1.0, 2),
                                  ResidualMethod::GlDifference, opts);
    CHECK(gl.method == ResidualMethod::GlDifference);
    CHECK(gl.points_skipped == 0);
    // first-order GL error with h = 1e-3 on O(1) derivatives
    CHECK(gl.max_abs <= 1e-2);
}

TEST_CASE("nonlinear profile residual is informational") {
    // The chain rule does not hold for D^0.5_x of (X - 2T)^2, so the
    // residual is reported but not bounded.
    const auto prob = transport_problem(Order(1.0), Order(0.5), 2.0, parse("x"), {0.0, 6.0, 0.0, 1.0});
    const auto sol = solve_constant_coeff(prob, parse("z^2"));
    const auto report = residual_fpde(sol, prob, linspace(2.0, 5.0, 3), linspace(0.2, 0.8, 2),
                                      ResidualMethod::Quadrature);
    CHECK(report.points_skipped == 0);
    CHECK(std::isfinite(report.max_abs));
    MESSAGE("z^2 profile residual max_abs = " << report.max_abs);
}

TEST_CASE("transformed residual converges at second order") {
    auto sweep = [](const Solution& sol, const FpdeProblem& prob) {
        std::array<double, 3> r{};
        const int sizes[] = {32, 64, 128};
        for (int k = 0; k < 3; ++k) {
            const auto rep = residual_transformed(sol, prob, linspace(0.5, 2.0, sizes[k]), linspace(0.5, 2.0, sizes[k]));
            CHECK(rep.points_skipped == 0);
            CHECK(rep.method == ResidualMethod::TransformedClassical);
            r[k] = rep.max_abs;
        }
        return r;
    };
    SUBCASE("transport with a sine profile") {
        const auto prob = transport_problem(Order(1.0), Order(0.5), 2.0, parse("x"), {0.0, 10.0, 0.0, 4.0});
        const auto r = sweep(solve_constant_coeff(prob, parse("sin(z)")), prob);
        CHECK(observed_order(r[0], r[1]) >= 1.9);
        CHECK(observed_order(r[1], r[2]) >= 1.9);
    }
    SUBCASE("similarity with a quadratic profile") {
        const auto prob = similarity_problem(Order(0.5), Order(0.5), {0.1, 10.0, 0.1, 10.0});
        const auto r = sweep(solve_similarity(prob, parse("z^2")), prob);
        CHECK(observed_order(r[0], r[1]) >= 1.9);
        CHECK(observed_order(r[1], r[2]) >= 1.9);
    }
    SUBCASE("constant solution has zero residual") {
        const auto prob = transport_problem(Order(0.4), Order(0.7), 1.0, parse("3"), {0.0, 10.0, 0.0, 4.0});
        const auto rep = residual_transformed(solve_constant_coeff(prob, parse("3")), prob, linspace(0.5, 2.0, 8),
                                              linspace(0.5, 2.0, 8));
        CHECK(rep.max_abs == 0.0);
    }
}

TEST_CASE("fundamental theorem check") {
    QuadratureConfig cfg;
    cfg.n_panels = 1024;
    const std::array<double, 3> xs{0.5, 1.0, 2.0};
    for (double a : {0.3, 0.5, 0.7}) {
        CAPTURE(a);
        CHECK(fundamental_check(poly(1.0), Order(a), xs, cfg) <= 1e-5);
        CHECK(fundamental_check(poly(2.0), Order(a), xs, cfg) <= 1e-5);
        CHECK(fundamental_check(sine(), Order(a), xs, cfg) <= 1e-5);
    }
    CHECK(fundamental_check(poly(0.0), Order(0.5), xs, cfg) <= 1e-14);
    CHECK(fundamental_check(sine(), Order(1.0), xs, cfg) <= 1e-6);
}

TEST_CASE("integration by parts check") {
    QuadratureConfig cfg;
    cfg.n_panels = 1024;
    const ScalarFn one([](double) { return 1.0; }, [](double) { return 0.0; });
    CHECK(parts_check(one, poly(2.0), Order(1.0), 1.5, cfg) <= 1e-8);
    const ScalarFn zero([](double) { return 0.0; }, [](double) { return 0.0; });
    CHECK(parts_check(zero, zero, Order(0.5), 1.0, cfg) == 0.0);
    // For u = v = xi the two sides differ; at b = 1 the gap is 1 - a.
    for (double a : {0.3, 0.5, 0.8}) {
        const double oracle_gap = 2.0 * oracle::gamma(2.0) / oracle::gamma(2.0 - a) *
                                      oracle::gamma(3.0 - a) / oracle::gamma(3.0) -
                                  1.0;
        CHECK(std::abs(parts_check(poly(1.0), poly(1.0), Order(a), 1.0, cfg) - std::abs(oracle_gap)) <= 1e-5);
    }
    CHECK(std::abs(parts_check(poly(1.0), poly(1.0), Order(0.5), 1.0, cfg) - 0.5) <= 1e-5);
    CHECK_THROWS_AS(parts_check(one, one, Order(0.5), -1.0, cfg), DomainError);
}

TEST_CASE("quadrature and GL estimates converge to each other") {
    const std::array<double, 3> xs{0.5, 1.0, 2.0};
    const std::array<double, 3> hs{1e-2, 1e-3, 1e-4};
    const auto rows = compare_methods(poly(1.0), Order(0.5), xs, hs);
    REQUIRE(rows.size() == 3);
    CHECK(std::abs(rows[1].quadrature - 2.0 / oracle::sqrt_pi) <= 1e-8);
    for (const auto& r : rows) {
        CAPTURE(r.x);
        CHECK(r.order >= 0.8);
        CHECK(r.gap <= 1e-2);
        CHECK(r.gaps[0] > r.gaps[2]);
        CHECK(r.gap == r.gaps[2]);
    }
    const auto flat = compare_methods(poly(0.0), Order(0.5), xs, hs);
    CHECK(flat[0].gap == 0.0);
    CHECK(std::isnan(flat[0].order));
    CHECK_THROWS_AS(compare_methods(poly(1.0), Order(0.5), xs, std::span<const double>{}), DomainError);
}

}  // TEST_SUITE
