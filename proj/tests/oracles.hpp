#pragma once

// Independent brute-force oracles used only by the tests.  Nothing here
// shares code with the library implementation: J_n comes from the ascending
// power series or the cosine integral representation, Y_n from its integral
// representation, Y_0 also from the classical log-weighted cosine integral.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

inline constexpr long double PI_L = 3.14159265358979323846264338327950288L;
inline constexpr long double GAMMA_L = 0.57721566490153286060651209008240243L;

// Ascending series in long double; relative-accurate while x is small enough
// that the alternating terms do not cancel catastrophically (x <= ~12).
inline double bessel_j_series(int n, double x) {
    long double lead = 1.0L;
    for (int m = 1; m <= n; ++m) lead *= static_cast<long double>(x) / (2.0L * m);
    const long double q = static_cast<long double>(x) * x / 4.0L;
    long double s = 1.0L, t = 1.0L;
    for (int j = 1; j < 400; ++j) {
        t *= -q / (static_cast<long double>(j) * (j + n));
        s += t;
        if (j > 4 && fabsl(t) < 1e-30L * fabsl(s)) break;
    }
    return static_cast<double>(lead * s);
}

// (1/pi) Int_0^pi cos(n t - x sin t) dt by the periodic trapezoid rule.  The
// integrand's odd derivatives vanish at both endpoints for integer n, so the
// rule converges spectrally; 8192 nodes is far past machine accuracy for
// n <= 20, x <= 50.
inline double bessel_j_quadrature(int n, double x) {
    const int m = 8192;
    long double s = 0.0L;
    for (int i = 0; i <= m; ++i) {
        const long double t = PI_L * i / m;
        const long double v = cosl(n * t - static_cast<long double>(x) * sinl(t));
        s += (i == 0 || i == m) ? 0.5L * v : v;
    }
    return static_cast<double>(s / m);
}

inline double bessel_j(int n, double x) {
    return x <= 12.0 ? bessel_j_series(n, x) : bessel_j_quadrature(n, x);
}

// Tanh-sinh quadrature; handles the endpoint log singularity of the Y_0
// representation and the decaying tails below.
inline long double tanh_sinh(const std::function<long double(long double)>& f, long double a,
                             long double b) {
    const long double h = 1.0L / 64.0L;
    const long double c = 0.5L * (b - a), mid = 0.5L * (a + b);
    long double s = 0.0L;
    for (int j = -600; j <= 600; ++j) {
        const long double t = j * h;
        const long double u = 0.5L * PI_L * sinhl(t);
        const long double w = tanhl(u);
        const long double x = mid + c * w;
        if (x <= a || x >= b) continue;
        const long double dw = 0.5L * PI_L * coshl(t) / (coshl(u) * coshl(u));
        const long double fx = f(x);
        if (!std::isfinite(static_cast<double>(fx))) continue;
        s += fx * dw;
    }
    return s * h * c;
}

// Y_0(x) = (4/pi^2) Int_0^{pi/2} cos(x cos th) (gamma + ln(2 x sin^2 th)) dth
inline double bessel_y0_quadrature(double x) {
    if (x <= 0.0) throw std::domain_error("y0 oracle needs x > 0");
    const long double xl = x;
    const long double v = tanh_sinh(
        [xl](long double th) {
            const long double s = sinl(th);
            return cosl(xl * cosl(th)) * (GAMMA_L + logl(2.0L * xl * s * s));
        },
        0.0L, 0.5L * PI_L);
    return static_cast<double>(v * 4.0L / (PI_L * PI_L));
}

// Y_n(x) = (1/pi) Int_0^pi sin(x sin th - n th) dth
//        - (1/pi) Int_0^inf [e^{nt} + (-1)^n e^{-nt}] e^{-x sinh t} dt.
// First integral by composite Simpson (the integrand is smooth but not
// periodic); second by tanh-sinh on a truncated range.
inline double bessel_y_quadrature(int n, double x) {
    if (x <= 0.0) throw std::domain_error("y oracle needs x > 0");
    const long double xl = x;
    const int m = 1 << 17;  // Simpson intervals; error ~ 1e-13 for n<=20, x<=50
    const long double h = PI_L / m;
    long double osc = 0.0L;
    for (int i = 0; i <= m; ++i) {
        const long double t = h * i;
        const long double v = sinl(xl * sinl(t) - n * t);
        const long double w = (i == 0 || i == m) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
        osc += w * v;
    }
    osc *= h / 3.0L;

    const long double tail_end = asinhl(760.0L / xl);  // e^{-x sinh t} below 1e-330 beyond
    const long double sign = (n % 2 == 0) ? 1.0L : -1.0L;
    const long double tail = tanh_sinh(
        [xl, n, sign](long double t) {
            return (expl(n * t) + sign * expl(-n * t)) * expl(-xl * sinhl(t));
        },
        0.0L, tail_end);
    return static_cast<double>((osc - tail) / PI_L);
}

// First positive zero of J_0 by bisection on the series oracle.
inline double j0_first_zero() {
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bessel_j_series(0, lo) * bessel_j_series(0, mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
