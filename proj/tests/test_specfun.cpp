#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tdi/specfun.hpp"

using namespace tdi;

// Comparison with a small absolute floor: in the neighborhoods of the
// interlacing zeros of J_n / Y_n no finite-precision pair of methods can
// certify a purely relative bound.
static void check_close(double got, double want, double rel, double floor_abs = 5e-13) {
    CHECK(std::fabs(got - want) <= std::max(rel * std::fabs(want), floor_abs));
}

// ---------------------------------------------------------------------------
// bessel_j
// ---------------------------------------------------------------------------

TEST_CASE("bessel_j: values at the origin") {
    CHECK(specfun::bessel_j(0, 0.0) == 1.0);
    CHECK(specfun::bessel_j(1, 0.0) == 0.0);
    CHECK(specfun::bessel_j(7, 0.0) == 0.0);
}

TEST_CASE("bessel_j: first zero of J_0 located by the series oracle") {
    const double x0 = oracle::j0_first_zero();
    CHECK(x0 == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(std::fabs(specfun::bessel_j(0, x0)) < 1e-8);
}

TEST_CASE("bessel_j: agreement with independent oracles, n <= 20, x <= 50") {
    for (int n = 0; n <= 20; ++n) {
        for (double x = 0.05; x <= 50.0; x += 0.73) {
            const double want = oracle::bessel_j(n, x);
            check_close(specfun::bessel_j(n, x), want, 1e-10);
        }
    }
}

TEST_CASE("bessel_j: recurrence J_{n-1} + J_{n+1} = (2n/x) J_n") {
    for (int n = 1; n <= 60; n += 3) {
        for (double x : {0.1, 0.9, 2.7, 7.5, 18.3, 44.0, 97.0}) {
            const double a = specfun::bessel_j(n - 1, x) + specfun::bessel_j(n + 1, x);
            const double b = 2.0 * n / x * specfun::bessel_j(n, x);
            const double scale = std::max({std::fabs(a), std::fabs(b), 1e-280});
            CHECK(std::fabs(a - b) / scale < 1e-10);
        }
    }
}

TEST_CASE("bessel_j: array evaluation matches scalar path") {
    for (double x : {0.3, 5.0, 18.338449438707615, 240.0}) {
        const auto all = specfun::bessel_j_all(40, x);
        for (int n = 0; n <= 40; n += 5)
            check_close(all[n], specfun::bessel_j(n, x), 1e-12);
    }
}

TEST_CASE("bessel_j: domain errors") {
    CHECK_THROWS_AS(specfun::bessel_j(-1, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::bessel_j(201, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::bessel_j(0, -0.5), std::domain_error);
    CHECK_THROWS_AS(specfun::bessel_j(0, 1001.0), std::domain_error);
    CHECK_THROWS_AS(specfun::bessel_j(0, std::nan("")), std::domain_error);
}

// ---------------------------------------------------------------------------
// bessel_y
// ---------------------------------------------------------------------------

TEST_CASE("bessel_y: leading logarithm near the origin") {
    // Y_0(x) ~ (2/pi) ln x as x -> 0+, so the ratio approaches 2/pi.
    const double x = 1e-6;
    const double ratio = specfun::bessel_y(0, x) / std::log(x);
    CHECK(std::fabs(ratio - 2.0 / pi) / (2.0 / pi) < 0.02);
}

TEST_CASE("bessel_y: Y_0(1) against the integral-representation oracle") {
    check_close(specfun::bessel_y(0, 1.0), oracle::bessel_y0_quadrature(1.0), 1e-10);
}

TEST_CASE("bessel_y: agreement with the integral-representation oracle") {
    for (int n : {0, 1, 2, 5, 11, 20}) {
        for (double x : {0.2, 0.9, 3.1, 7.5, 14.2, 26.0, 41.0, 50.0}) {
            const double want = oracle::bessel_y_quadrature(n, x);
            check_close(specfun::bessel_y(n, x), want, 1e-10, 1e-11);
        }
    }
}

TEST_CASE("bessel_y: domain errors at x <= 0") {
    CHECK_THROWS_AS(specfun::bessel_y(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(specfun::bessel_y(3, -1.0), std::domain_error);
}

// ---------------------------------------------------------------------------
// cyl_derivatives
// ---------------------------------------------------------------------------

TEST_CASE("cyl_derivatives: J_0' = -J_1") {
    const auto e = specfun::cyl_derivatives(0, 2.0);
    CHECK(e.jprime == doctest::Approx(-specfun::bessel_j(1, 2.0)).epsilon(1e-14));
}

TEST_CASE("cyl_derivatives: matches a centered finite difference") {
    const double x = 5.0, h = 1e-6;
    const auto e = specfun::cyl_derivatives(2, x);
    const double fd = (specfun::bessel_j(2, x + h) - specfun::bessel_j(2, x - h)) / (2.0 * h);
    CHECK(e.jprime == doctest::Approx(fd).epsilon(1e-6));
    const double fdy = (specfun::bessel_y(2, x + h) - specfun::bessel_y(2, x - h)) / (2.0 * h);
    CHECK(e.yprime == doctest::Approx(fdy).epsilon(1e-6));
}

TEST_CASE("cyl_derivatives: Wronskian J_n Y_n' - J_n' Y_n = 2/(pi x)") {
    SUBCASE("spot check at n = 3, x = 7.5") {
        const auto e = specfun::cyl_derivatives(3, 7.5);
        const double w = e.j * e.yprime - e.jprime * e.y;
        CHECK(w == doctest::Approx(2.0 / (pi * 7.5)).epsilon(1e-10));
    }
    SUBCASE("sweep over the supported envelope") {
        for (int n = 0; n <= 60; n += 4) {
            for (double x = 0.1; x <= 100.0; x *= 1.45) {
                const auto e = specfun::cyl_derivatives(n, x);
                const double w = e.j * e.yprime - e.jprime * e.y;
                const double want = 2.0 / (pi * x);
                CHECK(std::fabs(w - want) / want < 1e-10);
            }
        }
    }
}

TEST_CASE("hankel1_0: components are J_0 and Y_0") {
    const auto h = specfun::hankel1_0(3.7);
    CHECK(h.real() == specfun::bessel_j(0, 3.7));
    CHECK(h.imag() == specfun::bessel_y(0, 3.7));
}
