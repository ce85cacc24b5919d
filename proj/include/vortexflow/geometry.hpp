#ifndef VORTEXFLOW_GEOMETRY_HPP
#define VORTEXFLOW_GEOMETRY_HPP

#include <cmath>
#include <complex>

namespace vortexflow {

using complex = std::complex<double>;

/// Point or vector in the plane, in unit-disk coordinates.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline complex to_complex(Vec2 a) { return {a.x, a.y}; }
inline Vec2 to_vec(complex z) { return {z.real(), z.imag()}; }

/// Curl of a scalar field from its gradient: (d2 f, -d1 f).
constexpr Vec2 rotate_gradient(Vec2 grad) { return {grad.y, -grad.x}; }

}  // namespace vortexflow

#endif
