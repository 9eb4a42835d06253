#pragma once

// Image quality figures.
//
// Resolution is the -3 dB full width of the cut through the peak divided by
// 0.886, which makes a sinc mainlobe of Rayleigh width w read as w and so
// compares directly with the 2 pi / dk predictions. Sidelobe figures exclude
// an ellipse of semi-axes 1.5 * measured resolution around the peak.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/image.hpp"

namespace netsense {

enum class Axis { x, y };

inline const char *to_string(Axis a) { return a == Axis::x ? "x" : "y"; }

/// -3 dB full width of |sinc| in units of its Rayleigh width.
inline constexpr double half_power_width_factor = 0.886;

struct Peak {
  std::size_t ix = 0;
  std::size_t iy = 0;
  cplx value;
  Vec2 position; // refined to sub-pixel
};

namespace detail {

// Vertex offset of a parabola through log-magnitudes (l, c, r), in pixels.
inline double parabolic_offset(double l, double c, double r) {
  if (!(l > 0.0) || !(c > 0.0) || !(r > 0.0)) return 0.0;
  const double a = std::log(l), b = std::log(c), d = std::log(r);
  const double den = a - 2.0 * b + d;
  if (!(den < 0.0)) return 0.0;
  return std::clamp(0.5 * (a - d) / den, -0.5, 0.5);
}

} // namespace detail

/// Global maximum of |I| (first in row-major order on ties), refined by a
/// 3-point parabolic fit on log-magnitude along each axis.
inline Peak find_peak(const ComplexImage &img) {
  img.check();
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double m = std::abs(img.pixels[i]);
    if (m > best_mag) best_mag = m, best = i;
  }
  Peak p;
  p.ix = best % img.grid.nx;
  p.iy = best / img.grid.nx;
  p.value = img.pixels[best];
  double ox = 0.0, oy = 0.0;
  if (p.ix > 0 && p.ix + 1 < img.grid.nx)
    ox = detail::parabolic_offset(img.magnitude(p.ix - 1, p.iy), best_mag, img.magnitude(p.ix + 1, p.iy));
  if (p.iy > 0 && p.iy + 1 < img.grid.ny)
    oy = detail::parabolic_offset(img.magnitude(p.ix, p.iy - 1), best_mag, img.magnitude(p.ix, p.iy + 1));
  const Vec2 c = img.grid.position(p.ix, p.iy);
  p.position = {c.x + ox * img.grid.dx, c.y + oy * img.grid.dy};
  return p;
}

namespace detail {

// Half-power (-3 dB) full width (meters) of the cut through the peak. Strict mode enforces
// the measurement preconditions; lenient mode only needs both crossings.
inline double half_power_width(const ComplexImage &img, const Peak &pk, Axis axis, bool strict) {
  const bool along_x = axis == Axis::x;
  const std::size_t n = along_x ? img.grid.nx : img.grid.ny;
  const std::size_t c = along_x ? pk.ix : pk.iy;
  const double step = along_x ? img.grid.dx : img.grid.dy;
  auto mag = [&](std::size_t i) { return along_x ? img.magnitude(i, pk.iy) : img.magnitude(pk.ix, i); };

  const double peak = std::abs(pk.value);
  if (!(peak > 0.0)) throw MeasurementError("image is identically zero");
  if (strict && (pk.ix == 0 || pk.iy == 0 || pk.ix + 1 == img.grid.nx || pk.iy + 1 == img.grid.ny))
    throw MeasurementError("peak lies on the grid boundary");

  const double thr = peak * std::sqrt(0.5);
  std::size_t lo = c, hi = c;
  while (lo > 0 && mag(lo - 1) >= thr) --lo;
  while (hi + 1 < n && mag(hi + 1) >= thr) ++hi;
  if (lo == 0 || hi + 1 == n)
    throw MeasurementError(std::string("mainlobe along ") + to_string(axis) + " is not contained in the grid");
  if (strict && hi - lo + 1 < 3)
    throw MeasurementError(std::string("mainlobe along ") + to_string(axis) + " is unresolved by the grid");

  auto crossing = [&](std::size_t below, std::size_t above) {
    const double a = mag(below), b = mag(above);
    return (thr - a) / (b - a); // fraction of the way from `below` to `above`
  };
  const double left = static_cast<double>(lo - 1) + crossing(lo - 1, lo);
  const double right = static_cast<double>(hi + 1) - crossing(hi + 1, hi);
  return (right - left) * step;
}

} // namespace detail

/// Measured resolution along `axis` in meters.
inline double measure_resolution(const ComplexImage &img, Axis axis) {
  const Peak pk = find_peak(img);
  return detail::half_power_width(img, pk, axis, true) / half_power_width_factor;
}

struct LobeOptions {
  double mainlobe_scale = 1.5;                                       // ellipse semi-axes / measured resolution
  double search_radius = std::numeric_limits<double>::infinity();   // only pixels this close to the peak count
};

namespace detail {

struct LobeSplit {
  double peak = 0.0;
  double max_outside = 0.0;
  double energy_in = 0.0;
  double energy_out = 0.0;
  std::size_t outside = 0;
};

inline LobeSplit split_mainlobe(const ComplexImage &img, const LobeOptions &opt) {
  const Peak pk = find_peak(img);
  const double ax = opt.mainlobe_scale * half_power_width(img, pk, Axis::x, false) / half_power_width_factor;
  const double ay = opt.mainlobe_scale * half_power_width(img, pk, Axis::y, false) / half_power_width_factor;
  const Vec2 centre = img.grid.position(pk.ix, pk.iy);

  LobeSplit s;
  s.peak = std::abs(pk.value);
  for (std::size_t iy = 0; iy < img.grid.ny; ++iy)
    for (std::size_t ix = 0; ix < img.grid.nx; ++ix) {
      const Vec2 d = img.grid.position(ix, iy) - centre;
      const double m = img.magnitude(ix, iy);
      if ((d.x / ax) * (d.x / ax) + (d.y / ay) * (d.y / ay) <= 1.0) {
        s.energy_in += m * m;
      } else if (norm(d) <= opt.search_radius) {
        s.energy_out += m * m;
        s.max_outside = std::max(s.max_outside, m);
        ++s.outside;
      }
    }
  if (s.outside == 0) throw MeasurementError("mainlobe region covers the whole image");
  return s;
}

inline double to_db20(double ratio) {
  return ratio > 0.0 ? 20.0 * std::log10(ratio) : -std::numeric_limits<double>::infinity();
}

} // namespace detail

/// Highest sidelobe relative to the peak, dB (-inf when nothing lies outside the mainlobe).
inline double pslr(const ComplexImage &img, const LobeOptions &opt = {}) {
  const auto s = detail::split_mainlobe(img, opt);
  return detail::to_db20(s.max_outside / s.peak);
}

/// Energy outside the mainlobe over energy inside, dB.
inline double islr(const ComplexImage &img, const LobeOptions &opt = {}) {
  const auto s = detail::split_mainlobe(img, opt);
  if (!(s.energy_out > 0.0)) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(s.energy_out / s.energy_in);
}

/// |I(truth)|^2 over the variance of pixels farther than 10 resolution cells
/// from the truth, dB. `cell` defaults to the larger measured resolution.
inline double peak_snr(const ComplexImage &img, Vec2 truth, std::optional<double> cell = std::nullopt) {
  img.check();
  const auto idx = img.grid.nearest(truth);
  if (!idx) throw MeasurementError("truth position lies outside the grid");
  const double c = cell ? *cell : std::max(measure_resolution(img, Axis::x), measure_resolution(img, Axis::y));
  if (!(c > 0.0)) throw MeasurementError("resolution cell must be positive");

  std::vector<cplx> bg;
  for (std::size_t iy = 0; iy < img.grid.ny; ++iy)
    for (std::size_t ix = 0; ix < img.grid.nx; ++ix)
      if (distance(img.grid.position(ix, iy), truth) > 10.0 * c) bg.push_back(img.at(ix, iy));
  if (bg.size() < 100)
    throw MeasurementError("too few background pixels (" + std::to_string(bg.size()) + " < 100)");

  cplx mean{};
  for (const auto &v : bg) mean += v;
  mean /= static_cast<double>(bg.size());
  double var = 0.0;
  for (const auto &v : bg) var += std::norm(v - mean);
  var /= static_cast<double>(bg.size());

  const double signal = std::norm(img.at(idx->first, idx->second));
  if (!(var > 0.0)) return signal > 0.0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / var);
}

struct ImageMetrics {
  Vec2 peak_pos;
  cplx peak_val;
  std::optional<double> rho_x_meas;
  std::optional<double> rho_y_meas;
  std::optional<double> pslr_db;
  std::optional<double> islr_db;
  std::optional<double> peak_snr_db;
  std::vector<std::string> notes; // why a figure is missing
};

/// Every figure that can be extracted; failures are recorded in `notes`.
inline ImageMetrics analyze(const ComplexImage &img, std::optional<Vec2> truth = std::nullopt,
                            std::optional<double> cell = std::nullopt) {
  ImageMetrics m;
  const Peak pk = find_peak(img);
  m.peak_pos = pk.position;
  m.peak_val = pk.value;
  auto attempt = [&](std::optional<double> &slot, const char *name, auto &&fn) {
    try {
      slot = fn();
    } catch (const MeasurementError &e) {
      m.notes.push_back(std::string(name) + ": " + e.what());
    }
  };
  attempt(m.rho_x_meas, "rho_x", [&] { return measure_resolution(img, Axis::x); });
  attempt(m.rho_y_meas, "rho_y", [&] { return measure_resolution(img, Axis::y); });
  attempt(m.pslr_db, "pslr", [&] { return pslr(img); });
  attempt(m.islr_db, "islr", [&] { return islr(img); });
  if (truth) attempt(m.peak_snr_db, "peak_snr", [&] { return peak_snr(img, *truth, cell); });
  return m;
}

} // namespace netsense
