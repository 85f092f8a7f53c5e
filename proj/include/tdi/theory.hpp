#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tdi/imaging.hpp"
#include "tdi/scene.hpp"
#include "tdi/specfun.hpp"

// -----------------------------------------------------------------------------
// Predictions of the imaging-map structure and tooling to test them.  The
// closed-form surrogate
//
//   Phi(z) = sum_m J_0(|k x_m - k_a z|) / ln(ell_m/2)
//
// approximates the normalized map up to an unknown positive factor, so every
// comparison here works on normalized maps and correlations.  With a wrong
// assumed wavenumber the peak of crack m sits at (k/k_a) x_m instead of x_m.
// -----------------------------------------------------------------------------

namespace tdi::theory {

struct Peak {
    Vec2 location;
    double value = 0.0;
};

struct PeakReport {
    std::vector<Peak> peaks;  // descending value, pairwise separation > suppression_radius
    double suppression_radius = 0.0;
    double threshold = 0.0;
};

inline constexpr double default_peak_threshold = 0.5;

// J_0 main-lobe quarter wavelength: the natural peak-resolution scale.
inline double default_suppression_radius(double k_a) { return pi / (2.0 * k_a); }

// Normalized |Phi| raster on the grid (disk-masked cells only).
inline imaging::ImagingMap phi_map(const Scene& scene, const ImagingGrid& grid, double k,
                                   double k_a) {
    if (!(k > 0.0 && k_a > 0.0)) throw std::invalid_argument("phi_map: wavenumbers must be positive");
    if (scene.cracks.empty()) throw std::invalid_argument("phi_map: scene has no cracks");
    imaging::ImagingMap map;
    map.grid = grid;
    map.kind = imaging::MapKind::phi_predictor;
    map.assumed_wavenumber = k_a;
    map.values.assign(grid.size(), 0.0);
    map.mask = grid.mask;
    double peak = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!map.mask[i]) continue;
        const Vec2 z = grid.points[i];
        double phi = 0.0;
        for (const Crack& c : scene.cracks) {
            const Vec2 arg = k * c.center - k_a * z;
            phi += specfun::bessel_j(0, norm(arg)) / std::log(c.half_length / 2.0);
        }
        map.values[i] = std::fabs(phi);
        peak = std::max(peak, map.values[i]);
    }
    if (peak == 0.0) throw std::invalid_argument("phi_map: predictor is identically zero");
    for (size_t i = 0; i < grid.size(); ++i)
        if (map.mask[i]) map.values[i] /= peak;
    return map;
}

// Peak location predicted for a crack centered at x_m when the map is formed
// with assumed wavenumber k_a: (k/k_a) x_m.
inline Vec2 predicted_location(Vec2 x_m, double k, double k_a) {
    if (!(k_a > 0.0)) throw std::invalid_argument("predicted_location: k_a must be positive");
    return (k / k_a) * x_m;
}

// Greedy non-maximum suppression: repeatedly take the largest remaining cell
// >= threshold (ties broken by cell index), then blank everything within the
// suppression radius.  An empty report is a valid outcome.
inline PeakReport extract_peaks(const imaging::ImagingMap& map, double threshold,
                                double suppression_radius) {
    if (map.kind == imaging::MapKind::raw_td)
        throw std::invalid_argument("extract_peaks expects a normalized or predictor map");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("extract_peaks: threshold must lie in (0, 1)");
    if (!(suppression_radius > map.grid.spacing()))
        throw std::invalid_argument("extract_peaks: suppression radius must exceed the grid spacing");

    PeakReport report;
    report.threshold = threshold;
    report.suppression_radius = suppression_radius;
    std::vector<uint8_t> alive = map.mask;
    for (;;) {
        double best = threshold;
        ptrdiff_t best_i = -1;
        for (size_t i = 0; i < map.values.size(); ++i) {
            if (alive[i] && map.values[i] >= best && (best_i < 0 || map.values[i] > best)) {
                best = map.values[i];
                best_i = static_cast<ptrdiff_t>(i);
            }
        }
        if (best_i < 0) break;
        const Vec2 at = map.grid.points[static_cast<size_t>(best_i)];
        report.peaks.push_back({at, map.values[static_cast<size_t>(best_i)]});
        for (size_t i = 0; i < alive.size(); ++i)
            if (alive[i] && distance(map.grid.points[i], at) <= suppression_radius) alive[i] = 0;
    }
    return report;
}

inline PeakReport extract_peaks(const imaging::ImagingMap& map) {
    return extract_peaks(map, default_peak_threshold,
                         default_suppression_radius(map.assumed_wavenumber));
}

// Pearson correlation over the cells unmasked in both maps.
inline double compare_maps(const imaging::ImagingMap& a, const imaging::ImagingMap& b) {
    if (a.grid.resolution != b.grid.resolution ||
        a.grid.half_extent != b.grid.half_extent)
        throw std::invalid_argument("compare_maps: grids differ");
    double sa = 0, sb = 0;
    size_t n = 0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        if (a.mask[i] && b.mask[i]) {
            sa += a.values[i];
            sb += b.values[i];
            ++n;
        }
    }
    if (n < 2) throw std::invalid_argument("compare_maps: no common unmasked cells");
    const double ma = sa / n, mb = sb / n;
    double vab = 0, va = 0, vb = 0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        if (a.mask[i] && b.mask[i]) {
            const double da = a.values[i] - ma, db = b.values[i] - mb;
            vab += da * db;
            va += da * da;
            vb += db * db;
        }
    }
    if (va == 0.0 || vb == 0.0)
        throw std::invalid_argument("compare_maps: constant map has no correlation");
    return vab / std::sqrt(va * vb);
}

// One-to-one crack/peak assignment, nearest predicted-location pairs first
// (ties broken by crack index).  Cracks left without a peak carry +inf.
struct PeakMatching {
    std::vector<int> crack_to_peak;          // -1 when unmatched
    std::vector<int> peak_to_crack;          // -1 when unmatched
    std::vector<double> crack_shift_error;   // m; +inf for unmatched cracks
};

inline PeakMatching match_peaks(const PeakReport& report, const Scene& scene, double k,
                                double k_a) {
    const size_t n_crack = scene.cracks.size();
    const size_t n_peak = report.peaks.size();
    PeakMatching m;
    m.crack_to_peak.assign(n_crack, -1);
    m.peak_to_crack.assign(n_peak, -1);
    m.crack_shift_error.assign(n_crack, std::numeric_limits<double>::infinity());

    std::vector<std::tuple<double, size_t, size_t>> pairs;  // (distance, crack, peak)
    pairs.reserve(n_crack * n_peak);
    for (size_t c = 0; c < n_crack; ++c) {
        const Vec2 pred = predicted_location(scene.cracks[c].center, k, k_a);
        for (size_t p = 0; p < n_peak; ++p)
            pairs.emplace_back(distance(pred, report.peaks[p].location), c, p);
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [d, c, p] : pairs) {
        if (m.crack_to_peak[c] >= 0 || m.peak_to_crack[p] >= 0) continue;
        m.crack_to_peak[c] = static_cast<int>(p);
        m.peak_to_crack[p] = static_cast<int>(c);
        m.crack_shift_error[c] = d;
    }
    return m;
}

// Distance from each crack's predicted location to its matched peak.
inline std::vector<double> shift_error(const PeakReport& report, const Scene& scene, double k,
                                       double k_a) {
    if (report.peaks.empty()) throw std::invalid_argument("shift_error: empty peak report");
    return match_peaks(report, scene, k, k_a).crack_shift_error;
}

// CSV rows "rank,x,y,value,matched_crack,shift_error_m"; matched_crack is -1
// and the error empty for unmatched peaks.
inline void write_peaks_csv(const PeakReport& report, const PeakMatching& matching,
                            const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "rank,x,y,value,matched_crack,shift_error_m\n";
    char buf[256];
    for (size_t p = 0; p < report.peaks.size(); ++p) {
        const int c = p < matching.peak_to_crack.size() ? matching.peak_to_crack[p] : -1;
        if (c >= 0) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%d,%.17g\n", p,
                          report.peaks[p].location.x, report.peaks[p].location.y,
                          report.peaks[p].value, c, matching.crack_shift_error[static_cast<size_t>(c)]);
        } else {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,-1,\n", p,
                          report.peaks[p].location.x, report.peaks[p].location.y,
                          report.peaks[p].value);
        }
        os << buf;
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace tdi::theory
