#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdi/geometry.hpp"

// -----------------------------------------------------------------------------
// Integer-order cylinder functions J_n, Y_n and their derivatives.
//
// Evaluation strategy:
//   - J_0, J_1, Y_0, Y_1: ascending series in long double below x = 18,
//     Hankel (P,Q) asymptotics above.  The crossover keeps both branches at
//     ~1e-13 relative accuracy or better.
//   - J_n, n >= 2: upward recurrence while n < x (J is not the minimal
//     solution there), otherwise Miller-type downward recurrence normalized
//     with  1 = J_0 + 2*sum_k J_{2k}.
//   - Y_n, n >= 2: upward recurrence from Y_0, Y_1 (Y is the dominant
//     solution, so this is stable for every n).
//
// Supported envelope: 0 <= n <= 200, 0 <= x <= 1000; outside it the functions
// throw std::domain_error instead of returning silently inaccurate values.
// -----------------------------------------------------------------------------

namespace tdi::specfun {

inline constexpr int max_supported_order = 200;
inline constexpr double max_supported_argument = 1000.0;

struct CylinderEval {
    int order = 0;
    double argument = 0.0;
    double j = 0.0;
    double y = 0.0;
    double jprime = 0.0;
    double yprime = 0.0;
};

namespace detail {

inline constexpr long double pi_l = 3.14159265358979323846264338327950288L;
inline constexpr long double gamma_l = 0.57721566490153286060651209008240243L;
inline constexpr double series_asymptotic_switch = 18.0;

inline void check_domain(int n, double x, bool require_positive_x) {
    if (n < 0 || n > max_supported_order)
        throw std::domain_error("cylinder function order out of supported range [0, 200]: n = " +
                                std::to_string(n));
    if (!std::isfinite(x) || x < 0.0 || x > max_supported_argument)
        throw std::domain_error("cylinder function argument out of supported range [0, 1000]: x = " +
                                std::to_string(x));
    if (require_positive_x && x == 0.0)
        throw std::domain_error("Y_n is singular at x = 0");
}

// Amplitude sums of the Hankel asymptotic expansion for order n (0 or 1):
//   J_n = sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),  chi = x - (2n+1) pi/4,
//   Y_n = sqrt(2/(pi x)) (P sin(chi) + Q cos(chi)).
// Terms are summed until they stop decreasing; for x >= 18 the smallest term
// is below 1e-15 of the result.
inline void hankel_pq(int n, double x, double& p_out, double& q_out) {
    const long double mu = 4.0L * n * n;
    const long double w = 8.0L * static_cast<long double>(x);
    long double a = 1.0L;
    long double p = 1.0L, q = 0.0L;
    long double prev = 1e30L;
    for (int j = 1; j < 64; ++j) {
        const long double odd = 2.0L * j - 1.0L;
        a *= (mu - odd * odd) / (static_cast<long double>(j) * w);
        const long double mag = fabsl(a);
        if (mag >= prev) break;  // divergent tail reached
        prev = mag;
        switch (j & 3) {
            case 1: q += a; break;
            case 2: p -= a; break;
            case 3: q -= a; break;
            default: p += a; break;
        }
        if (mag < 1e-20L) break;
    }
    p_out = static_cast<double>(p);
    q_out = static_cast<double>(q);
}

inline double j0_kernel(double x) {
    if (x < series_asymptotic_switch) {
        const long double qq = static_cast<long double>(x) * x / 4.0L;
        long double s = 1.0L, t = 1.0L;
        for (int k = 1; k < 64; ++k) {
            t *= -qq / (static_cast<long double>(k) * k);
            s += t;
            if (k > 4 && fabsl(t) < 1e-22L * fabsl(s)) break;
        }
        return static_cast<double>(s);
    }
    double p, q;
    hankel_pq(0, x, p, q);
    const double chi = x - 0.25 * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

inline double j1_kernel(double x) {
    if (x < series_asymptotic_switch) {
        const long double qq = static_cast<long double>(x) * x / 4.0L;
        long double s = 1.0L, t = 1.0L;
        for (int k = 1; k < 64; ++k) {
            t *= -qq / (static_cast<long double>(k) * (k + 1.0L));
            s += t;
            if (k > 4 && fabsl(t) < 1e-22L * fabsl(s)) break;
        }
        return static_cast<double>(s * static_cast<long double>(x) / 2.0L);
    }
    double p, q;
    hankel_pq(1, x, p, q);
    const double chi = x - 0.75 * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

inline double y0_kernel(double x) {
    if (x < series_asymptotic_switch) {
        const long double qq = static_cast<long double>(x) * x / 4.0L;
        long double t = 1.0L, h = 0.0L, s = 0.0L;
        for (int k = 1; k < 64; ++k) {
            t *= -qq / (static_cast<long double>(k) * k);
            h += 1.0L / k;
            s -= t * h;  // (-1)^{k+1} H_k (x^2/4)^k / (k!)^2
            if (k > 4 && fabsl(t) < 1e-22L) break;
        }
        const long double j0 = static_cast<long double>(j0_kernel(x));
        const long double lead = (logl(static_cast<long double>(x) / 2.0L) + gamma_l) * j0;
        return static_cast<double>((2.0L / pi_l) * (lead + s));
    }
    double p, q;
    hankel_pq(0, x, p, q);
    const double chi = x - 0.25 * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::sin(chi) + q * std::cos(chi));
}

inline double y1_kernel(double x) {
    if (x < series_asymptotic_switch) {
        // Y_1 = (2/pi)(ln(x/2)+gamma) J_1 - 2/(pi x)
        //       - (x/(2 pi)) sum_k (-1)^k (H_k + H_{k+1}) (x^2/4)^k / (k! (k+1)!)
        const long double qq = static_cast<long double>(x) * x / 4.0L;
        long double u = 1.0L, hk = 0.0L, hk1 = 1.0L, s = 1.0L;  // k = 0 term: (H_0+H_1) u_0 = 1
        for (int k = 1; k < 64; ++k) {
            u *= -qq / (static_cast<long double>(k) * (k + 1.0L));
            hk += 1.0L / k;
            hk1 += 1.0L / (k + 1.0L);
            s += u * (hk + hk1);
            if (k > 4 && fabsl(u) < 1e-22L * (fabsl(s) + 1.0L)) break;
        }
        const long double xl = static_cast<long double>(x);
        const long double j1 = static_cast<long double>(j1_kernel(x));
        const long double v = (2.0L / pi_l) * (logl(xl / 2.0L) + gamma_l) * j1 -
                              2.0L / (pi_l * xl) - xl / (2.0L * pi_l) * s;
        return static_cast<double>(v);
    }
    double p, q;
    hankel_pq(1, x, p, q);
    const double chi = x - 0.75 * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::sin(chi) + q * std::cos(chi));
}

// J_n for x below the recurrence regime: leading terms of the ascending
// series, accurate to ~x^6 relative.
inline double j_tiny_argument(int n, double x) {
    const double q = x * x / 4.0;
    double lead = 1.0;
    for (int m = 1; m <= n; ++m) lead *= x / (2.0 * m);  // (x/2)^n / n!, underflows gracefully
    return lead * (1.0 - q / (n + 1.0) + q * q / (2.0 * (n + 1.0) * (n + 2.0)));
}

}  // namespace detail

// J_0..J_nmax in one pass.  Downward Miller recurrence keeps every order at
// ~1e-13 relative accuracy; used heavily by the Green's-function series.
inline std::vector<double> bessel_j_all(int nmax, double x) {
    detail::check_domain(nmax, x, false);
    std::vector<double> out(static_cast<size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x < 1e-6) {
        for (int n = 0; n <= nmax; ++n) out[n] = detail::j_tiny_argument(n, x);
        return out;
    }
    const int m0 = std::max(nmax, static_cast<int>(std::ceil(x)));
    const int start = m0 + 40 + static_cast<int>(12.0 * std::cbrt(std::max(x, 1.0)));
    double jp = 0.0;             // J_{m+1} (arbitrary scale)
    double jc = 1e-300;          // J_m
    double sum = 0.0;            // accumulates J_0 + 2 sum J_{2k} in the same scale
    for (int m = start; m >= 1; --m) {
        double jm = 2.0 * m / x * jc - jp;  // J_{m-1}
        jp = jc;
        jc = jm;
        if (m - 1 <= nmax) out[m - 1] = jc;
        if ((m - 1) % 2 == 0 && m - 1 > 0) sum += 2.0 * jc;
        if (std::fabs(jc) > 1e250) {
            constexpr double rescale = 1e-250;
            jp *= rescale;
            jc *= rescale;
            sum *= rescale;
            for (int i = std::max(0, m - 1); i <= nmax; ++i) out[i] *= rescale;
        }
    }
    sum += jc;  // jc now holds J_0-scale value
    const double factor = 1.0 / sum;
    for (double& v : out) v *= factor;
    return out;
}

inline double bessel_j(int n, double x) {
    detail::check_domain(n, x, false);
    if (n == 0) return detail::j0_kernel(x);
    if (x == 0.0) return 0.0;
    if (n == 1) return detail::j1_kernel(x);
    if (x < 1e-6) return detail::j_tiny_argument(n, x);
    if (n < x) {
        // oscillatory regime: upward recurrence is stable
        double jm1 = detail::j0_kernel(x);
        double jc = detail::j1_kernel(x);
        for (int m = 1; m < n; ++m) {
            const double jn1 = 2.0 * m / x * jc - jm1;
            jm1 = jc;
            jc = jn1;
        }
        return jc;
    }
    return bessel_j_all(n, x)[n];
}

// Y_0..Y_nmax by upward recurrence.  Once the true value exceeds the double
// range the remaining entries are -inf (Y_n -> -inf monotonically in n).
inline std::vector<double> bessel_y_all(int nmax, double x) {
    detail::check_domain(nmax, x, true);
    std::vector<double> out(static_cast<size_t>(nmax) + 1, 0.0);
    out[0] = detail::y0_kernel(x);
    if (nmax == 0) return out;
    out[1] = detail::y1_kernel(x);
    for (int m = 1; m < nmax; ++m) {
        if (!std::isfinite(out[m]) || std::fabs(out[m]) > 1e290) {
            for (int i = m + 1; i <= nmax; ++i) out[i] = -INFINITY;
            return out;
        }
        out[m + 1] = 2.0 * m / x * out[m] - out[m - 1];
    }
    return out;
}

inline double bessel_y(int n, double x) {
    detail::check_domain(n, x, true);
    if (n == 0) return detail::y0_kernel(x);
    if (n == 1) return detail::y1_kernel(x);
    return bessel_y_all(n, x)[n];
}

// J_n, Y_n and radial derivatives via J_n' = (J_{n-1} - J_{n+1})/2 with the
// n = 0 special case J_0' = -J_1 (same relations for Y).
inline CylinderEval cyl_derivatives(int n, double x) {
    detail::check_domain(n, x, true);
    CylinderEval e;
    e.order = n;
    e.argument = x;
    const auto j = bessel_j_all(n + 1, x);
    const auto y = bessel_y_all(n + 1, x);
    e.j = j[n];
    e.y = y[n];
    if (n == 0) {
        e.jprime = -j[1];
        e.yprime = -y[1];
    } else {
        e.jprime = 0.5 * (j[n - 1] - j[n + 1]);
        e.yprime = 0.5 * (y[n - 1] - y[n + 1]);
    }
    return e;
}

// H_0^(1)(x) = J_0(x) + i Y_0(x)
inline std::complex<double> hankel1_0(double x) {
    detail::check_domain(0, x, true);
    return {detail::j0_kernel(x), detail::y0_kernel(x)};
}

}  // namespace tdi::specfun
