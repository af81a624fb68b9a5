#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ctev/geometry.hpp"

using namespace ctev;

TEST_CASE("sector validation and degenerate-opening flag") {
    CHECK_THROWS_AS(Sector(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(Sector(-4.0, 1.0), std::invalid_argument);
    CHECK(Sector(-pi / 2, pi / 2).degenerate_opening());
    CHECK_FALSE(Sector(-pi / 4, pi / 4).degenerate_opening());
}

TEST_CASE("delta_w endpoint values") {
    CHECK(delta_w(Sector(-pi / 2, pi / 2)) == doctest::Approx(0.7071067811865476));
    // oracle: dense minimization of cos(theta/2) over the interval
    auto brute = [](double a, double b) {
        double m = 2;
        for (int i = 0; i <= 100000; ++i)
            m = std::min(m, std::cos((a + (b - a) * i / 100000.0) / 2));
        return m;
    };
    CHECK(delta_w(Sector(-pi / 4, pi / 4)) ==
          doctest::Approx(brute(-pi / 4, pi / 4)).epsilon(1e-12));
    CHECK(delta_w(Sector(-pi / 4, pi / 4)) == doctest::Approx(0.9238795325112867));
    CHECK(delta_w(Sector(0, pi / 2)) == doctest::Approx(0.7071067811865476));
    CHECK(delta_w(Sector(0, pi / 2)) == doctest::Approx(brute(0, pi / 2)).epsilon(1e-12));
    // near-full sector: delta stays positive but shrinks like cos(theta_M/2)
    CHECK(delta_w(Sector(-0.9 * pi, 0.9 * pi)) ==
          doctest::Approx(std::cos(0.45 * pi)).epsilon(1e-14));
}

TEST_CASE("delta_w reflection symmetry") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.05, 1.4);
    for (int i = 0; i < 50; ++i) {
        double a = U(rng), b = a + U(rng) * 0.5;
        CHECK(delta_w(Sector(-b, -a)) == doctest::Approx(delta_w(Sector(a, b))).epsilon(1e-14));
    }
}

TEST_CASE("corner_ball_measure small and large rho") {
    Sector s(-pi / 4, pi / 4);
    CHECK(corner_ball_measure(s, 1.0, 2.0) == doctest::Approx(0.7853981633974483));
    CHECK(corner_ball_measure(s, 1e-9, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(corner_ball_measure(Sector(1e-9, pi - 1e-9), 2.0, 1.0) ==
          doctest::Approx(pi / 2).epsilon(1e-8));
}

TEST_CASE("corner_ball_measure Monte Carlo oracle for rho > h") {
    // B_rho cap S_h with rho > h is S_h itself; check the closed value against
    // rejection sampling of the truncated sector.
    Sector s(0.3, 2.1);
    const double h = 0.8, rho = 1.5;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-rho, rho);
    const long n = 10'000'000;
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        double x = U(rng), y = U(rng);
        double r = std::hypot(x, y), th = std::atan2(y, x);
        if (r < rho && r < h && s.contains_angle(th)) ++hits;
    }
    const double est = 4.0 * rho * rho * hits / n;
    const double exact = corner_ball_measure(s.theta_m < 0 ? s : s, rho, h);
    const double p = exact / (4 * rho * rho);
    const double sigma = 4 * rho * rho * std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(est - exact) < 3 * sigma + 1e-12);
}

TEST_CASE("corner_ball_measure monotone and quadratic scaling") {
    Sector s(-0.5, 0.9);
    double prev = 0;
    for (double rho = 0.1; rho < 2.0; rho += 0.1) {
        double m = corner_ball_measure(s, rho, 1.0);
        CHECK(m >= prev);
        prev = m;
    }
    for (double rho : {0.1, 0.3, 0.49}) {
        double ratio = corner_ball_measure(s, rho, 1.0) / corner_ball_measure(s, rho / 2, 1.0);
        CHECK(ratio == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("quadrature: constants, polynomials, weights") {
    TruncatedSector ts(Sector(-pi / 4, pi / 4), 1.0);
    auto area = build_quadrature(ts, Region::sector_area, 6);
    for (double w : area.weights) CHECK(w > 0);
    CHECK(area.total_weight() == doctest::Approx(pi / 4).epsilon(1e-12));
    CHECK(area.integrate([](const Vector2d&) { return 1.0; }) ==
          doctest::Approx(0.7853981634).epsilon(1e-10));

    auto ray = build_quadrature(ts, Region::boundary_ray_minus, 6);
    CHECK(ray.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ray.integrate([](const Vector2d& x) { return x.norm(); }) ==
          doctest::Approx(0.5).epsilon(1e-12));

    auto arc = build_quadrature(ts, Region::arc, 8);
    CHECK(arc.total_weight() == doctest::Approx(ts.arc_length()).epsilon(1e-12));

    // int_{S_h} r cos(theta) over (-pi/2, pi/2), h = 1: symbolic value 2/3
    TruncatedSector half(Sector(-pi / 2 + 1e-15, pi / 2 - 1e-15), 1.0);
    auto a2 = build_quadrature(half, Region::sector_area, 10);
    CHECK(a2.integrate([](const Vector2d& x) { return x.x(); }) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("quadrature converges on exp(-sqrt(r)) integrands") {
    TruncatedSector ts(Sector(0.0, 1.0), 1.0);
    // reference: high order
    auto ref_rule = build_quadrature(ts, Region::boundary_ray_minus, 24);
    auto f = [](const Vector2d& x) { return std::exp(-std::sqrt(x.norm())); };
    const double ref = ref_rule.integrate(f);
    double prev_err = -1;
    for (int order : {1, 2, 4, 8}) {
        auto rule = build_quadrature(ts, Region::boundary_ray_minus, order);
        double err = std::abs(rule.integrate(f) - ref);
        if (prev_err > 1e-13 && err > 1e-13) CHECK(prev_err / err > 2.0);
        prev_err = err;
    }
}

TEST_CASE("unknown region and bad order rejected") {
    TruncatedSector ts(Sector(0.0, 1.0), 1.0);
    CHECK_THROWS_AS(build_quadrature(ts, static_cast<Region>(99), 4), std::invalid_argument);
    CHECK_THROWS_AS(build_quadrature(ts, Region::arc, 0), std::invalid_argument);
}
