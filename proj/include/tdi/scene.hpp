#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdi/geometry.hpp"

// -----------------------------------------------------------------------------
// Physical configuration: medium, cracks, incident directions, boundary
// sampling and the imaging raster, plus validation of the standing
// assumptions (short cracks, mutual separation, boundary standoff).
// -----------------------------------------------------------------------------

namespace tdi {

struct PhysicalMedium {
    double permittivity = vacuum_permittivity;   // F/m
    double permeability = vacuum_permeability;   // H/m
    double frequency = 0.0;                      // Hz
};

inline void check_medium(const PhysicalMedium& m) {
    if (!(std::isfinite(m.permittivity) && m.permittivity > 0.0))
        throw std::invalid_argument("medium permittivity must be positive and finite");
    if (!(std::isfinite(m.permeability) && m.permeability > 0.0))
        throw std::invalid_argument("medium permeability must be positive and finite");
    if (!(std::isfinite(m.frequency) && m.frequency > 0.0))
        throw std::invalid_argument("medium frequency must be positive and finite");
}

// k = omega sqrt(eps mu), omega = 2 pi f
inline double wavenumber(const PhysicalMedium& m) {
    check_medium(m);
    return 2.0 * pi * m.frequency * std::sqrt(m.permittivity * m.permeability);
}

// One linear perfectly conducting crack: segment of half-length `half_length`
// centered at `center`, tilted by `angle` (radians, reduced to [0, pi)).
struct Crack {
    Vec2 center;
    double half_length = 0.0;  // m
    double angle = 0.0;        // rad in [0, pi)
};

inline Crack make_crack(Vec2 center, double half_length, double angle_rad) {
    double a = std::fmod(angle_rad, pi);
    if (a < 0.0) a += pi;
    return Crack{center, half_length, a};
}

struct Scene {
    double domain_radius = 1.0;  // m
    std::vector<Crack> cracks;
    PhysicalMedium true_medium;
};

// Cracks must keep this fraction of the radius clear of the boundary.
inline constexpr double boundary_standoff_fraction = 0.1;

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;     // length | standoff | separation | weak_separation
    std::string message;
};

// Checks the short-crack condition ell < lambda/2 (error; the stricter
// full-length reading 2*ell < lambda/2 is reported as a warning), the
// boundary standoff and the pairwise separation k|x_m - x_m'|.  Returns one
// diagnostic per violated condition; an empty list means the scene is usable.
inline std::vector<Diagnostic> validate_scene(const Scene& scene) {
    std::vector<Diagnostic> out;
    check_medium(scene.true_medium);
    if (!(std::isfinite(scene.domain_radius) && scene.domain_radius > 0.0))
        throw std::invalid_argument("domain radius must be positive and finite");
    if (scene.cracks.empty())
        throw std::invalid_argument("scene must contain at least one crack");

    const double k = wavenumber(scene.true_medium);
    const double half_lambda = pi / k;
    const double rmax = scene.domain_radius * (1.0 - boundary_standoff_fraction);

    for (size_t m = 0; m < scene.cracks.size(); ++m) {
        const Crack& c = scene.cracks[m];
        if (!(std::isfinite(c.half_length) && c.half_length > 0.0))
            throw std::invalid_argument("crack half-length must be positive and finite");
        const double ratio = c.half_length / half_lambda;
        if (ratio >= 1.0) {
            out.push_back({Severity::error, "length",
                           "crack " + std::to_string(m) + ": half-length exceeds lambda/2 (ratio " +
                               std::to_string(ratio) + ")"});
        } else if (2.0 * c.half_length >= half_lambda) {
            out.push_back({Severity::warning, "length",
                           "crack " + std::to_string(m) + ": full length exceeds lambda/2 (ratio " +
                               std::to_string(2.0 * ratio) + "); not short in the strict sense"});
        }
        const Vec2 tang = unit_at_angle(c.angle);
        const double reach = std::max(norm(c.center + c.half_length * tang),
                                      norm(c.center - c.half_length * tang));
        if (reach > rmax) {
            out.push_back({Severity::error, "standoff",
                           "crack " + std::to_string(m) + ": endpoint at radius " +
                               std::to_string(reach) + " violates standoff " + std::to_string(rmax)});
        }
    }
    for (size_t m = 0; m < scene.cracks.size(); ++m) {
        for (size_t mp = m + 1; mp < scene.cracks.size(); ++mp) {
            const double kd = k * distance(scene.cracks[m].center, scene.cracks[mp].center);
            if (kd <= 0.25) {
                out.push_back({Severity::error, "separation",
                               "cracks " + std::to_string(m) + "," + std::to_string(mp) +
                                   ": k|x_m - x_m'| = " + std::to_string(kd) + " <= 1/4"});
            } else if (kd < 5.0) {
                out.push_back({Severity::warning, "weak_separation",
                               "cracks " + std::to_string(m) + "," + std::to_string(mp) +
                                   ": k|x_m - x_m'| = " + std::to_string(kd) + " < 5, separation is weak"});
            }
        }
    }
    return out;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::error) return true;
    return false;
}

struct DirectionSet {
    std::vector<Vec2> directions;  // unit vectors
    int count() const { return static_cast<int>(directions.size()); }
};

// N unit vectors at angles 2 (n-1) pi / N, n = 1..N; the first is (1, 0).
inline DirectionSet uniform_directions(int n) {
    if (n < 1) throw std::invalid_argument("direction count must be >= 1");
    DirectionSet set;
    set.directions.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) set.directions.push_back(unit_at_angle(2.0 * pi * i / n));
    return set;
}

// Uniform-in-angle boundary sampling with equal trapezoidal weights 2 pi R / P
// (spectrally accurate for smooth periodic integrands on the circle).
struct BoundaryGrid {
    double radius = 1.0;
    std::vector<double> angles;
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    int count() const { return static_cast<int>(nodes.size()); }
    double node_spacing() const { return 2.0 * pi * radius / count(); }
};

inline BoundaryGrid make_boundary_grid(double radius, int node_count) {
    if (node_count < 8) throw std::invalid_argument("boundary grid needs at least 8 nodes");
    if (!(std::isfinite(radius) && radius > 0.0))
        throw std::invalid_argument("boundary grid radius must be positive");
    BoundaryGrid g;
    g.radius = radius;
    g.angles.reserve(static_cast<size_t>(node_count));
    g.nodes.reserve(static_cast<size_t>(node_count));
    g.weights.assign(static_cast<size_t>(node_count), 2.0 * pi * radius / node_count);
    for (int p = 0; p < node_count; ++p) {
        const double phi = 2.0 * pi * p / node_count;
        g.angles.push_back(phi);
        g.nodes.push_back({radius * std::cos(phi), radius * std::sin(phi)});
    }
    return g;
}

// Square raster of sampling points over [-R, R]^2, masked to the open disk.
struct ImagingGrid {
    int resolution = 0;           // points per axis
    double half_extent = 1.0;     // = domain radius R
    std::vector<Vec2> points;     // row-major, index = iy*resolution + ix
    std::vector<uint8_t> mask;    // 1 = inside the open disk

    double spacing() const { return 2.0 * half_extent / (resolution - 1); }
    size_t size() const { return points.size(); }
    size_t index(int ix, int iy) const { return static_cast<size_t>(iy) * resolution + ix; }
};

inline ImagingGrid make_imaging_grid(double radius, int resolution) {
    if (resolution < 2) throw std::invalid_argument("imaging grid resolution must be >= 2");
    if (!(std::isfinite(radius) && radius > 0.0))
        throw std::invalid_argument("imaging grid radius must be positive");
    ImagingGrid g;
    g.resolution = resolution;
    g.half_extent = radius;
    g.points.reserve(static_cast<size_t>(resolution) * resolution);
    g.mask.reserve(static_cast<size_t>(resolution) * resolution);
    const double h = 2.0 * radius / (resolution - 1);
    for (int iy = 0; iy < resolution; ++iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            const Vec2 z{-radius + ix * h, -radius + iy * h};
            g.points.push_back(z);
            g.mask.push_back(norm(z) < radius ? 1 : 0);
        }
    }
    return g;
}

}  // namespace tdi
