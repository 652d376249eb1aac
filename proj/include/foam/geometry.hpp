// Planar vector math and angle helpers.
//
// Frame convention used throughout the project: x forward, y to the right
// when viewed from above (north-east style). Headings are measured from +x
// towards +y, so a positive yaw turns the vehicle to the right.

#pragma once

#include <cmath>
#include <numbers>

namespace foam {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[nodiscard]] constexpr double deg2rad(double deg) noexcept { return deg * kPi / 180.0; }
[[nodiscard]] constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Wraps an angle to (-pi, pi].
[[nodiscard]] inline double wrap_angle(double a) noexcept {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }

    [[nodiscard]] constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    /// z-component of the 3-D cross product.
    [[nodiscard]] constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    [[nodiscard]] double norm() const { return std::hypot(x, y); }

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

[[nodiscard]] inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

[[nodiscard]] inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace foam
