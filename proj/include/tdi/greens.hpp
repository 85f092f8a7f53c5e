#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "tdi/geometry.hpp"
#include "tdi/specfun.hpp"

// -----------------------------------------------------------------------------
// Neumann function N(x, z; k) of the Helmholtz operator on the disk of radius
// R:  (Lap + k^2) N = -delta_z in the disk, dN/dnu = 0 on the rim.
//
// Construction: free-space kernel plus a regular correction whose coefficients
// cancel the radial derivative on the rim termwise,
//
//   N(x,z;k) = (i/4) H0^(1)(k|x-z|)
//            - (i/4) sum_n eps_n [H_n^(1)'(kR)/J_n'(kR)] J_n(k|x|) J_n(k|z|)
//                      cos(n (phi_x - phi_z)),           eps_0 = 1, eps_n = 2.
//
// The tail of the series decays like (|x||z|/R^2)^n / n, so it is truncated
// adaptively at tail_tolerance with max_order as a hard cap.  Since k^2 is
// required not to be a Neumann eigenvalue, N is real-valued; the imaginary
// part produced by this formula is a truncation residual and doubles as an
// accuracy indicator.
//
// On the rim |x| = R the Wronskian collapses the two terms into
//
//   N(x,z;k) = (1/(2 pi k R)) sum_n eps_n [J_n(k|z|)/J_n'(kR)] cos(n psi),
//
// which BoundaryKernel evaluates in batch for the quadrature loops.
// -----------------------------------------------------------------------------

namespace tdi::greens {

struct eigenvalue_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesParams {
    int max_order = 0;                  // series truncation cap
    double tail_tolerance = 1e-12;      // relative term cutoff
    double eigenvalue_guard = 1e-8;     // minimum |J_n'(kR)| in the oscillatory range

    // max_order = max(ceil(kR) + 25, 500): the +25 floor covers the
    // super-exponential decay past the turning point; the 500 cap keeps the
    // geometric tail below tail_tolerance for |x||z|/R^2 up to ~0.95.
    static SeriesParams for_geometry(double k, double radius) {
        SeriesParams p;
        p.max_order = std::max(static_cast<int>(std::ceil(k * radius)) + 25, 500);
        return p;
    }

    void validate(double k, double radius) const {
        if (max_order < static_cast<int>(std::ceil(k * radius)) + 10)
            throw std::invalid_argument("SeriesParams.max_order must be >= ceil(kR) + 10");
        if (!(tail_tolerance > 0.0 && tail_tolerance <= 1e-6))
            throw std::invalid_argument("SeriesParams.tail_tolerance must lie in (0, 1e-6]");
        if (!(eigenvalue_guard > 0.0))
            throw std::invalid_argument("SeriesParams.eigenvalue_guard must be positive");
    }
};

namespace detail {

// Per-(k, R) tables: J_n(kR), Y_n(kR) and radial derivatives, capped where
// the double range runs out (J' underflow / Y overflow).
struct RimTables {
    double k = 0.0;
    double radius = 0.0;
    int n_cap_ratio = 0;               // last order where Y_n'/J_n' fits in a double
    int n_cap_inv = 0;                 // last order where 1/J_n' fits in a double
    std::vector<double> jp;            // J_n'(kR)
    std::vector<double> yp;            // Y_n'(kR)

    RimTables(double k_in, double radius_in, const SeriesParams& params)
        : k(k_in), radius(radius_in) {
        if (!(std::isfinite(k) && k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
        if (!(std::isfinite(radius) && radius > 0.0))
            throw std::invalid_argument("domain radius must be positive");
        params.validate(k, radius);
        const double c = k * radius;
        const int want = params.max_order;
        const auto j = specfun::bessel_j_all(std::min(want + 1, specfun::max_supported_order), c);
        const auto y = specfun::bessel_y_all(std::min(want + 1, specfun::max_supported_order), c);
        const int have = static_cast<int>(std::min(j.size(), y.size())) - 1;
        jp.resize(static_cast<size_t>(have) + 1);
        yp.resize(static_cast<size_t>(have) + 1);
        jp[0] = -j[1];
        yp[0] = -y[1];
        for (int n = 1; n < have; ++n) {
            jp[n] = 0.5 * (j[n - 1] - j[n + 1]);
            yp[n] = 0.5 * (y[n - 1] - y[n + 1]);
        }
        // Past the turning point |Y_n'| grows and |J_n'| decays super-
        // exponentially; cap each use before its quotient leaves the double
        // range (the series tail at these orders is already negligible).
        n_cap_ratio = n_cap_inv = have - 1;
        for (int n = 0; n <= n_cap_ratio; ++n) {
            if (!std::isfinite(yp[n]) || std::fabs(jp[n]) == 0.0 ||
                std::fabs(yp[n]) > 1e250 * std::fabs(jp[n])) {
                n_cap_ratio = n - 1;
                break;
            }
        }
        for (int n = 0; n <= n_cap_inv; ++n) {
            if (!std::isfinite(yp[n]) || std::fabs(jp[n]) < 1e-270) {
                n_cap_inv = n - 1;
                break;
            }
        }
        if (n_cap_ratio < static_cast<int>(std::ceil(c)) + 5)
            throw std::invalid_argument("series cap too small for kR; check k, R");

        // Zeros of J_n' lie above the order, so only n <= kR can sit near a
        // Neumann eigenvalue; beyond the turning point small |J_n'| is plain
        // decay and the term product stays bounded.
        const int n_guard = std::min(static_cast<int>(std::ceil(c)), n_cap_ratio);
        for (int n = 0; n <= n_guard; ++n) {
            if (std::fabs(jp[n]) < params.eigenvalue_guard)
                throw eigenvalue_error(
                    "k^2 is (numerically) a Neumann eigenvalue of the disk: |J_" + std::to_string(n) +
                    "'(kR)| < guard at kR = " + std::to_string(c) +
                    "; perturb the frequency slightly");
        }
    }
};

inline void check_points(Vec2 x, Vec2 z, double radius) {
    if (norm(x) > radius * (1.0 + 1e-9))
        throw std::invalid_argument("evaluation point x lies outside the closed disk");
    if (norm(z) >= radius)
        throw std::invalid_argument("source point z must lie strictly inside the disk");
}

// Correction series shared by neumann_function / regular_part.
// Accumulates  sum_n eps_n w_n J_n(k|x|) J_n(k|z|) cos(n psi)  with
// w_n = -(i/4) H_n'(kR)/J_n'(kR) = (1/4) Y_n'(kR)/J_n'(kR) - (i/4).
inline std::complex<double> correction_series(Vec2 x, Vec2 z, const RimTables& rim,
                                              const SeriesParams& params) {
    const double a = rim.k * norm(x);
    const double b = rim.k * norm(z);
    const int cap = std::min(params.max_order, rim.n_cap_ratio);
    const auto ja = specfun::bessel_j_all(cap, a);
    const auto jb = specfun::bessel_j_all(cap, b);
    const double psi = angle_of(x) - angle_of(z);
    const double c1 = std::cos(psi);

    const int n_min = static_cast<int>(std::ceil(rim.k * rim.radius)) + 10;
    double re = 0.0, im = 0.0;
    double ck = 1.0, ckm1 = 0.0;  // cos(n psi) Chebyshev recurrence
    int quiet = 0;
    for (int n = 0; n <= cap; ++n) {
        if (n == 1) {
            ckm1 = 1.0;
            ck = c1;
        } else if (n > 1) {
            const double next = 2.0 * c1 * ck - ckm1;
            ckm1 = ck;
            ck = next;
        }
        const double eps_n = (n == 0) ? 1.0 : 2.0;
        const double base = eps_n * ja[n] * jb[n];
        const double t_re = 0.25 * (rim.yp[n] / rim.jp[n]) * base * ck;
        const double t_im = -0.25 * base * ck;
        re += t_re;
        im += t_im;
        if (n >= n_min) {
            const double scale = std::fabs(re) + std::fabs(im) + 1e-300;
            if (std::fabs(t_re) + std::fabs(t_im) < params.tail_tolerance * scale) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        }
    }
    return {re, im};
}

}  // namespace detail

// N(x, z; k) for |x| <= R, |z| < R, x != z.
inline std::complex<double> neumann_function(Vec2 x, Vec2 z, double k, double radius,
                                             const SeriesParams& params) {
    detail::check_points(x, z, radius);
    const double r = distance(x, z);
    if (r < 1e-12 * radius)
        throw std::invalid_argument("neumann_function: x and z coincide (|x-z| < 1e-12 R)");
    const detail::RimTables rim(k, radius, params);
    const std::complex<double> free_term = std::complex<double>(0.0, 0.25) * specfun::hankel1_0(k * r);
    return free_term + detail::correction_series(x, z, rim, params);
}

// Regular part  R(x, z; k) = N(x, z; k) + (1/2pi) ln|x-z|,  continuous up to
// the diagonal; at |x-z| < 1e-12 R the analytic limit of the free-space part,
// i/4 - (ln(k/2) + gamma)/(2 pi), is used.
inline std::complex<double> regular_part(Vec2 x, Vec2 z, double k, double radius,
                                         const SeriesParams& params) {
    detail::check_points(x, z, radius);
    const detail::RimTables rim(k, radius, params);
    const double r = distance(x, z);
    std::complex<double> free_reg;
    if (r < 1e-12 * radius) {
        free_reg = {-(std::log(0.5 * k) + euler_gamma) / (2.0 * pi), 0.25};
    } else {
        const std::complex<double> h0 = specfun::hankel1_0(k * r);
        free_reg = {0.25 * (-h0.imag()) + std::log(r) / (2.0 * pi), 0.25 * h0.real()};
    }
    return free_reg + detail::correction_series(x, z, rim, params);
}

// Batch evaluator of N(x, z; k) for x on the rim.  For a fixed interior z the
// rim trace is the cosine series with coefficients
//   b_n = eps_n J_n(k|z|) / (2 pi k R J_n'(kR)),
// truncated adaptively; rows over many rim angles then cost O(n_eff) each via
// the Chebyshev recurrence.  Values are exactly real.
class BoundaryKernel {
  public:
    BoundaryKernel(double k, double radius, const SeriesParams& params)
        : rim_(k, radius, params), params_(params) {}

    double k() const { return rim_.k; }
    double radius() const { return rim_.radius; }

    // Fills b with the truncated coefficient sequence for this z.
    void coefficients(Vec2 z, std::vector<double>& b) const {
        const double rz = norm(z);
        if (rz >= rim_.radius)
            throw std::invalid_argument("BoundaryKernel: z must lie strictly inside the disk");
        const int cap = std::min(params_.max_order, rim_.n_cap_inv);
        const auto jb = specfun::bessel_j_all(cap, rim_.k * rz);
        const double pref = 1.0 / (2.0 * pi * rim_.k * rim_.radius);
        const int n_min = static_cast<int>(std::ceil(rim_.k * rim_.radius)) + 10;
        b.clear();
        b.reserve(static_cast<size_t>(cap) + 1);
        double scale = 0.0;
        int quiet = 0;
        for (int n = 0; n <= cap; ++n) {
            const double eps_n = (n == 0) ? 1.0 : 2.0;
            const double bn = pref * eps_n * jb[n] / rim_.jp[n];
            b.push_back(bn);
            scale += std::fabs(bn);
            if (n >= n_min) {
                if (std::fabs(bn) < params_.tail_tolerance * scale) {
                    if (++quiet >= 3) break;
                } else {
                    quiet = 0;
                }
            }
        }
    }

    // N(x_p, z; k) for rim points x_p at the given polar angles.
    void row(Vec2 z, std::span<const double> node_angles, std::span<double> out,
             std::vector<double>& scratch) const {
        coefficients(z, scratch);
        const double phi_z = angle_of(z);
        for (size_t p = 0; p < node_angles.size(); ++p) {
            const double c1 = std::cos(node_angles[p] - phi_z);
            double ckm1 = 1.0, ck = c1;
            double s = scratch[0];
            for (size_t n = 1; n < scratch.size(); ++n) {
                s += scratch[n] * ck;
                const double next = 2.0 * c1 * ck - ckm1;
                ckm1 = ck;
                ck = next;
            }
            out[p] = s;
        }
    }

    std::vector<double> row(Vec2 z, std::span<const double> node_angles) const {
        std::vector<double> out(node_angles.size());
        std::vector<double> scratch;
        row(z, node_angles, out, scratch);
        return out;
    }

  private:
    detail::RimTables rim_;
    SeriesParams params_;
};

}  // namespace tdi::greens
