#pragma once

#include <cmath>
#include <complex>

namespace netsense {

using cplx = std::complex<double>;

/// Propagation speed used everywhere (m/s).
inline constexpr double speed_of_light = 3.0e8;
inline constexpr double pi = 3.14159265358979323846;

/// Planar vector: a position in meters or a wavevector in rad/m.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
  constexpr Vec2 &operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2 &operator*=(double s) noexcept { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) noexcept = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) noexcept { return norm(a - b); }
inline bool is_finite(Vec2 a) noexcept { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Unit vector at angle `psi` from the +x axis.
inline Vec2 direction(double psi) noexcept { return {std::cos(psi), std::sin(psi)}; }

/// Free-space wavenumber 2*pi*f/c.
inline double wavenumber(double f_hz) noexcept { return 2.0 * pi * f_hz / speed_of_light; }

inline double wavelength(double f_hz) noexcept { return speed_of_light / f_hz; }

inline double deg2rad(double deg) noexcept { return deg * pi / 180.0; }
inline double rad2deg(double rad) noexcept { return rad * 180.0 / pi; }

} // namespace netsense
