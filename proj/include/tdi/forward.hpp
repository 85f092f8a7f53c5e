#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdi/greens.hpp"
#include "tdi/scene.hpp"

// -----------------------------------------------------------------------------
// Boundary measurement synthesis.  The data matrix holds the field difference
// u - w sampled on the rim, one row per incident direction, generated from
// the small-crack asymptotic model
//
//   (u - w)(x_p) = sum_m [2 pi / ln(ell_m/2)] w(x_m; k) N(x_p, x_m; k).
//
// The O(1/|ln ell|^2) remainder of that model is deliberately not synthesized;
// the calibrated noise channel stands in for it.
// -----------------------------------------------------------------------------

namespace tdi::forward {

// Sentinel for add_noise: leave the data untouched.
inline constexpr double no_noise = std::numeric_limits<double>::infinity();

struct BoundaryDataSet {
    std::vector<std::complex<double>> values;  // row-major, directions x nodes
    BoundaryGrid grid;
    DirectionSet directions;
    double true_wavenumber = 0.0;

    int direction_count() const { return directions.count(); }
    int node_count() const { return grid.count(); }
    std::complex<double>& at(int n, int p) {
        return values[static_cast<size_t>(n) * grid.count() + p];
    }
    const std::complex<double>& at(int n, int p) const {
        return values[static_cast<size_t>(n) * grid.count() + p];
    }
};

// w(x; k) = exp(i k theta . x), the crack-free background field.
inline std::complex<double> plane_wave(Vec2 x, double k, Vec2 direction) {
    if (std::fabs(norm(direction) - 1.0) > 1e-9)
        throw std::invalid_argument("plane_wave: direction must be a unit vector");
    const double phase = k * dot(direction, x);
    return {std::cos(phase), std::sin(phase)};
}

inline BoundaryDataSet synthesize_data(const Scene& scene, const DirectionSet& directions,
                                       const BoundaryGrid& grid, const greens::SeriesParams& params) {
    if (directions.count() < 1) throw std::invalid_argument("need at least one incident direction");
    const auto diags = validate_scene(scene);
    if (has_errors(diags)) {
        std::string msg = "synthesize_data: scene validation failed:";
        for (const auto& d : diags)
            if (d.severity == Severity::error) msg += " [" + d.code + "] " + d.message + ";";
        throw std::invalid_argument(msg);
    }
    const double k = wavenumber(scene.true_medium);
    const int n_dir = directions.count();
    const int n_node = grid.count();

    BoundaryDataSet data;
    data.grid = grid;
    data.directions = directions;
    data.true_wavenumber = k;
    data.values.assign(static_cast<size_t>(n_dir) * n_node, {0.0, 0.0});

    const greens::BoundaryKernel kernel(k, scene.domain_radius, params);
    std::vector<double> trace(static_cast<size_t>(n_node));
    std::vector<double> scratch;
    for (const Crack& crack : scene.cracks) {
        const double coef = 2.0 * pi / std::log(crack.half_length / 2.0);
        kernel.row(crack.center, grid.angles, trace, scratch);
        for (int n = 0; n < n_dir; ++n) {
            const std::complex<double> amp =
                coef * plane_wave(crack.center, k, directions.directions[n]);
            for (int p = 0; p < n_node; ++p) data.at(n, p) += amp * trace[p];
        }
    }
    return data;
}

// Adds i.i.d. circular complex Gaussian noise with per-entry variance
//   sigma^2 = mean(|data|^2) * 10^(-snr_db/10).
// Stream mapping (fixed so outputs are reproducible): std::mt19937_64 seeded
// with `seed`; entries visited row-major; per entry two uniforms u1 in (0,1],
// u2 in [0,1) from the top 53 bits drive one Box-Muller pair.
inline BoundaryDataSet add_noise(const BoundaryDataSet& data, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) return data;
    if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: snr_db must be finite or +inf");
    if (data.values.empty()) throw std::invalid_argument("add_noise: empty data");

    double power = 0.0;
    for (const auto& v : data.values) power += std::norm(v);
    power /= static_cast<double>(data.values.size());
    if (power == 0.0) throw std::invalid_argument("add_noise: all-zero data, SNR undefined");

    const double sigma2 = power * std::pow(10.0, -snr_db / 10.0);
    const double amp = std::sqrt(0.5 * sigma2);  // std-dev of each quadrature

    BoundaryDataSet out = data;
    std::mt19937_64 rng(seed);
    constexpr double inv53 = 1.0 / 9007199254740992.0;  // 2^-53
    for (auto& v : out.values) {
        const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * inv53;  // (0, 1]
        const double u2 = static_cast<double>(rng() >> 11) * inv53;          // [0, 1)
        const double mag = std::sqrt(-2.0 * std::log(u1));
        v += amp * std::complex<double>(mag * std::cos(2.0 * pi * u2), mag * std::sin(2.0 * pi * u2));
    }
    return out;
}

// Realized SNR in dB of `noisy` against the clean reference.
inline double measured_snr_db(const BoundaryDataSet& clean, const BoundaryDataSet& noisy) {
    if (clean.values.size() != noisy.values.size())
        throw std::invalid_argument("measured_snr_db: size mismatch");
    double s = 0.0, n = 0.0;
    for (size_t i = 0; i < clean.values.size(); ++i) {
        s += std::norm(clean.values[i]);
        n += std::norm(noisy.values[i] - clean.values[i]);
    }
    if (n == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(s / n);
}

// CSV layout: a metadata comment, a column header, then one row per matrix
// entry at 17 significant digits (bit-exact round trip).
inline void write_csv(const BoundaryDataSet& data, std::ostream& os) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "# N=%d,P=%d,k=%.17g,R=%.17g\n", data.direction_count(),
                  data.node_count(), data.true_wavenumber, data.grid.radius);
    os << buf << "n,p,node_x,node_y,re,im\n";
    for (int n = 0; n < data.direction_count(); ++n) {
        for (int p = 0; p < data.node_count(); ++p) {
            const auto& v = data.at(n, p);
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", n, p,
                          data.grid.nodes[p].x, data.grid.nodes[p].y, v.real(), v.imag());
            os << buf;
        }
    }
}

inline void write_csv(const BoundaryDataSet& data, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(data, os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline BoundaryDataSet read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# N=", 0) != 0)
        throw std::runtime_error("boundary data CSV: missing metadata header");
    int n_dir = 0, n_node = 0;
    double k = 0.0, radius = 0.0;
    if (std::sscanf(line.c_str(), "# N=%d,P=%d,k=%lg,R=%lg", &n_dir, &n_node, &k, &radius) != 4)
        throw std::runtime_error("boundary data CSV: malformed metadata header");
    if (!std::getline(is, line))  // column header
        throw std::runtime_error("boundary data CSV: truncated header");

    BoundaryDataSet data;
    data.grid = make_boundary_grid(radius, n_node);
    data.directions = uniform_directions(n_dir);
    data.true_wavenumber = k;
    data.values.assign(static_cast<size_t>(n_dir) * n_node, {0.0, 0.0});
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int n = 0, p = 0;
        double nx = 0, ny = 0, re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%lg,%lg,%lg,%lg", &n, &p, &nx, &ny, &re, &im) != 6)
            throw std::runtime_error("boundary data CSV: malformed row: " + line);
        if (n < 0 || n >= n_dir || p < 0 || p >= n_node)
            throw std::runtime_error("boundary data CSV: row index out of range");
        data.at(n, p) = {re, im};
        data.grid.nodes[p] = {nx, ny};
    }
    return data;
}

inline BoundaryDataSet read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_csv(is);
}

}  // namespace tdi::forward
