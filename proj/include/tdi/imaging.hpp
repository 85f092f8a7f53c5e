#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdi/forward.hpp"
#include "tdi/greens.hpp"
#include "tdi/parallel.hpp"
#include "tdi/scene.hpp"

// -----------------------------------------------------------------------------
// Topological-derivative imaging.  The adjoint field is recovered from the
// boundary data by trapezoidal quadrature against the Neumann function,
//
//   v_n(z) = sum_p w_p (u - w)(n, p) N(x_p, z; k_a),
//
// and the raw map is  Re sum_n v_n(z) conj(exp(i k_a theta_n . z)).  All maps
// are evaluated with an assumed wavenumber k_a that may differ from the true
// one.
// -----------------------------------------------------------------------------

namespace tdi::imaging {

enum class MapKind { raw_td, normalized, phi_predictor };

struct ImagingMap {
    ImagingGrid grid;
    std::vector<double> values;  // row-major; masked cells hold 0
    std::vector<uint8_t> mask;   // 1 = valid sample
    MapKind kind = MapKind::raw_td;
    double assumed_wavenumber = 0.0;
};

// Sampling points closer to the rim than one boundary-node spacing are
// rejected: the log singularity of N(x_p, z) degrades the trapezoid there.
inline double boundary_clearance(const BoundaryGrid& grid) { return grid.node_spacing(); }

inline std::vector<std::complex<double>> adjoint_field(const forward::BoundaryDataSet& data, Vec2 z,
                                                       double k_a, const greens::SeriesParams& params) {
    const double clearance = boundary_clearance(data.grid);
    const double dist = data.grid.radius - norm(z);
    if (dist < clearance)
        throw std::invalid_argument("adjoint_field: z is " + std::to_string(dist) +
                                    " m from the rim, needs >= " + std::to_string(clearance) + " m");
    const greens::BoundaryKernel kernel(k_a, data.grid.radius, params);
    const auto trace = kernel.row(z, data.grid.angles);
    const int n_dir = data.direction_count();
    const int n_node = data.node_count();
    std::vector<std::complex<double>> v(static_cast<size_t>(n_dir), {0.0, 0.0});
    for (int n = 0; n < n_dir; ++n) {
        std::complex<double> acc{0.0, 0.0};
        for (int p = 0; p < n_node; ++p) acc += data.grid.weights[p] * trace[p] * data.at(n, p);
        v[n] = acc;
    }
    return v;
}

// Raw topological-derivative raster.  Cells failing the rim-clearance guard
// are masked, never fatal.  Cell evaluations are independent and run in
// parallel; within a cell the summation order is fixed, so the raster is
// identical to a sequential evaluation.
inline ImagingMap td_map(const forward::BoundaryDataSet& data, const ImagingGrid& grid, double k_a,
                         const greens::SeriesParams& params) {
    ImagingMap map;
    map.grid = grid;
    map.kind = MapKind::raw_td;
    map.assumed_wavenumber = k_a;
    map.values.assign(grid.size(), 0.0);
    map.mask.assign(grid.size(), 0);

    const greens::BoundaryKernel kernel(k_a, data.grid.radius, params);
    const double clearance = boundary_clearance(data.grid);
    const double r_ok = data.grid.radius - clearance;
    const int n_dir = data.direction_count();
    const int n_node = data.node_count();
    const int cells = static_cast<int>(grid.size());

    parallel_for(0, cells, [&](int i) {
        thread_local std::vector<double> trace;
        thread_local std::vector<double> scratch;
        const Vec2 z = grid.points[static_cast<size_t>(i)];
        if (!grid.mask[static_cast<size_t>(i)] || norm(z) > r_ok) return;
        trace.resize(static_cast<size_t>(n_node));
        kernel.row(z, data.grid.angles, trace, scratch);
        double value = 0.0;
        for (int n = 0; n < n_dir; ++n) {
            std::complex<double> v{0.0, 0.0};
            for (int p = 0; p < n_node; ++p) v += data.grid.weights[p] * trace[p] * data.at(n, p);
            const std::complex<double> w =
                forward::plane_wave(z, k_a, data.directions.directions[n]);
            value += v.real() * w.real() + v.imag() * w.imag();  // Re(v * conj(w))
        }
        map.values[static_cast<size_t>(i)] = value;
        map.mask[static_cast<size_t>(i)] = 1;
    });
    return map;
}

// |raw| / max|raw| over unmasked cells; range [0, 1] with the max exactly 1.
inline ImagingMap normalize(const ImagingMap& map) {
    if (map.kind != MapKind::raw_td)
        throw std::invalid_argument("normalize expects a raw topological-derivative map");
    double peak = 0.0;
    for (size_t i = 0; i < map.values.size(); ++i)
        if (map.mask[i]) peak = std::max(peak, std::fabs(map.values[i]));
    if (peak == 0.0) throw std::invalid_argument("normalize: map is identically zero");
    ImagingMap out = map;
    out.kind = MapKind::normalized;
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = out.mask[i] ? std::fabs(out.values[i]) / peak : 0.0;
    return out;
}

// Copy with the mask tightened to |z| <= rmax (comparison helper).
inline ImagingMap restrict_to_radius(const ImagingMap& map, double rmax) {
    ImagingMap out = map;
    for (size_t i = 0; i < out.mask.size(); ++i) {
        if (out.mask[i] && norm(out.grid.points[i]) > rmax) {
            out.mask[i] = 0;
            out.values[i] = 0.0;
        }
    }
    return out;
}

inline std::pair<Vec2, double> argmax(const ImagingMap& map) {
    double best = -std::numeric_limits<double>::infinity();
    size_t best_i = 0;
    bool found = false;
    for (size_t i = 0; i < map.values.size(); ++i) {
        if (map.mask[i] && std::fabs(map.values[i]) > best) {
            best = std::fabs(map.values[i]);
            best_i = i;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("argmax: fully masked map");
    return {map.grid.points[best_i], best};
}

// ---- exports ----------------------------------------------------------------

// Rows "x,y,value" at 17 significant digits, y-major from -R to R; masked
// cells are written as 0.
inline void write_map_csv(const ImagingMap& map, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "x,y,value\n";
    char buf[256];
    for (int iy = 0; iy < map.grid.resolution; ++iy) {
        for (int ix = 0; ix < map.grid.resolution; ++ix) {
            const size_t i = map.grid.index(ix, iy);
            const Vec2 z = map.grid.points[i];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", z.x, z.y, map.values[i]);
            os << buf;
        }
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

// Binary 8-bit PGM (P5), value 0 -> black, 1 -> white, masked cells black.
// Image rows run top to bottom (y decreasing).
inline void write_map_pgm(const ImagingMap& map, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    const int res = map.grid.resolution;
    os << "P5\n" << res << " " << res << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(res));
    for (int iy = res - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < res; ++ix) {
            const size_t i = map.grid.index(ix, iy);
            const double v = map.mask[i] ? std::clamp(map.values[i], 0.0, 1.0) : 0.0;
            row[static_cast<size_t>(ix)] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
        os.write(reinterpret_cast<const char*>(row.data()), res);
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace tdi::imaging
