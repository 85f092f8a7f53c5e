#pragma once

#include <cmath>

namespace tdi {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

// Free-space constants of the anechoic-chamber background medium.
inline constexpr double vacuum_permittivity = 8.854e-12;       // F/m
inline constexpr double vacuum_permeability = 4.0e-7 * pi;     // H/m

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

inline Vec2 unit_at_angle(double phi) { return {std::cos(phi), std::sin(phi)}; }

inline Vec2 rotate(Vec2 a, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

}  // namespace tdi
