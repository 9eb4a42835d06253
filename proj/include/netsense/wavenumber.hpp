#pragma once

// Spectral support (wavenumber coverage) of an acquisition and the image
// resolution it predicts.
//
// Angle convention: psi is the direction from a sensor towards the target,
// measured from +x, so k_Tx = (2 pi f / c) [cos psi_Tx, sin psi_Tx] and
// k_Rx = -(2 pi f / c) [cos psi_Rx, sin psi_Rx]. A terminal at (0, 0) looking at
// (0, 20) has psi = 90 deg and excites wavenumbers along +k_y.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/geometry.hpp"
#include "netsense/hull.hpp"
#include "netsense/scene.hpp"

namespace netsense {

/// Hull extents at or below this width (rad/m) carry no resolution.
inline constexpr double zero_extent_tolerance = 1e-6;

inline constexpr std::size_t default_frequency_samples = 64;

struct Wavevectors {
  Vec2 tx;
  Vec2 rx;
};

/// Observation angle of `target` seen from `sensor`.
inline double observation_angle(Vec2 sensor, Vec2 target) {
  const Vec2 d = target - sensor;
  if (!(norm(d) > 0.0)) throw GeometryError("sensor coincides with target");
  return std::atan2(d.y, d.x);
}

/// Plane wavevectors Tx -> target and target -> Rx, both of magnitude 2 pi f / c.
inline Wavevectors unit_wavevectors(Vec2 tx_pos, Vec2 rx_pos, Vec2 target, double f_hz) {
  const Vec2 to_target = target - tx_pos;
  const Vec2 to_rx = rx_pos - target;
  const double rt = norm(to_target);
  const double rr = norm(to_rx);
  if (!(rt > 0.0)) throw GeometryError("transmitter coincides with target");
  if (!(rr > 0.0)) throw GeometryError("receiver coincides with target");
  const double k = wavenumber(f_hz);
  // k_Rx = -k grad ||x_Rx - x|| = +k (x_Rx - x_t) / ||x_Rx - x_t||
  return {(k / rt) * to_target, (k / rr) * to_rx};
}

inline Vec2 composite_wavenumber(Vec2 k_tx, Vec2 k_rx) { return k_tx - k_rx; }

struct WavenumberTile {
  ChannelId channel;
  std::vector<Vec2> samples;    // rad/m
  std::vector<double> freqs_hz; // frequency of each sample
  bool baseband = false;
};

enum class RegionLabel { monostatic, bistatic, fused };

inline const char *to_string(RegionLabel l) {
  switch (l) {
  case RegionLabel::monostatic: return "monostatic";
  case RegionLabel::bistatic: return "bistatic";
  case RegionLabel::fused: return "fused";
  }
  return "fused";
}

struct WavenumberRegion {
  std::vector<WavenumberTile> tiles;
  RegionLabel label = RegionLabel::fused;

  std::vector<Vec2> points() const {
    std::vector<Vec2> out;
    for (const auto &t : tiles) out.insert(out.end(), t.samples.begin(), t.samples.end());
    return out;
  }
};

/// Resolution predicted from the hull of a coverage region. An empty optional
/// means the extent along that axis vanishes (no resolution).
struct ResolutionEstimate {
  std::optional<double> rho_x;
  std::optional<double> rho_y;
  double dk_x = 0.0;
  double dk_y = 0.0;
  std::vector<Vec2> hull;
};

/// Segment K_B swept by a Tx/Rx pair over [f0 - B/2, f0 + B/2], `n_freq` uniform samples.
inline WavenumberTile coverage_segment(Vec2 tx, Vec2 rx, Vec2 target, double f0_hz, double bandwidth_hz,
                                       std::size_t n_freq, ChannelId channel = {}) {
  if (n_freq < 2) throw ValidationError("coverage_segment needs at least 2 frequency samples");
  if (!(bandwidth_hz > 0.0)) throw ValidationError("bandwidth must be positive");

  const Vec2 unit_sum = [&] {
    const auto kv = unit_wavevectors(tx, rx, target, 1.0);
    return composite_wavenumber(kv.tx, kv.rx) * (1.0 / wavenumber(1.0));
  }();

  WavenumberTile tile;
  tile.channel = channel;
  tile.samples.reserve(n_freq);
  tile.freqs_hz.reserve(n_freq);
  const double f_lo = f0_hz - 0.5 * bandwidth_hz;
  const double step = bandwidth_hz / static_cast<double>(n_freq - 1);
  for (std::size_t i = 0; i < n_freq; ++i) {
    const double f = i + 1 == n_freq ? f0_hz + 0.5 * bandwidth_hz : f_lo + static_cast<double>(i) * step;
    tile.freqs_hz.push_back(f);
    tile.samples.push_back(wavenumber(f) * unit_sum);
  }
  return tile;
}

/// One tile per active channel. With `baseband`, each tile is shifted by its
/// pair's centre-frequency composite wavevector (taken at the terminals' phase
/// centres), which is the support seen by magnitude-only imaging.
inline WavenumberRegion coverage_region(const Scenario &s, Vec2 target,
                                        std::size_t n_freq = default_frequency_samples, bool baseband = false) {
  require_valid(s);
  WavenumberRegion region;
  bool any_mono = false;
  bool any_bi = false;
  for (const auto pair : s.pairing.active_pairs()) {
    (pair.monostatic() ? any_mono : any_bi) = true;
    Vec2 shift{};
    if (baseband) {
      try {
        const auto kv = unit_wavevectors(s.terminals[pair.tx].phase_center, s.terminals[pair.rx].phase_center, target,
                                         s.f0_hz);
        shift = composite_wavenumber(kv.tx, kv.rx);
      } catch (const GeometryError &e) {
        throw GeometryError(std::string(e.what()) + " (pair " + to_string(pair) + " phase centre)");
      }
    }
    for (const auto &ch : s.channels(pair)) {
      WavenumberTile tile;
      try {
        tile = coverage_segment(s.tx_element(ch), s.rx_element(ch), target, s.f0_hz, s.bandwidth_hz, n_freq, ch);
      } catch (const GeometryError &e) {
        throw GeometryError(std::string(e.what()) + " (channel " + to_string(ch) + ")");
      }
      if (baseband) {
        for (auto &k : tile.samples) k -= shift;
        tile.baseband = true;
      }
      region.tiles.push_back(std::move(tile));
    }
  }
  region.label = any_mono && any_bi ? RegionLabel::fused : (any_bi ? RegionLabel::bistatic : RegionLabel::monostatic);
  return region;
}

/// Union of several regions (tiles concatenated in order).
inline WavenumberRegion merge(const std::vector<WavenumberRegion> &regions) {
  WavenumberRegion out;
  bool mono = false;
  bool bi = false;
  for (const auto &r : regions) {
    out.tiles.insert(out.tiles.end(), r.tiles.begin(), r.tiles.end());
    mono |= r.label != RegionLabel::bistatic;
    bi |= r.label != RegionLabel::monostatic;
  }
  out.label = mono && bi ? RegionLabel::fused : (bi ? RegionLabel::bistatic : RegionLabel::monostatic);
  return out;
}

/// Convex hull of every sample and the axis-aligned resolution 2 pi / dk it implies.
inline ResolutionEstimate predicted_resolution(const WavenumberRegion &region) {
  auto pts = region.points();
  if (pts.empty()) throw ValidationError("coverage region is empty");
  ResolutionEstimate est;
  est.hull = convex_hull(std::move(pts));
  const auto ext = axis_extents(est.hull);
  est.dk_x = ext.dx;
  est.dk_y = ext.dy;
  if (est.dk_x > zero_extent_tolerance) est.rho_x = 2.0 * pi / est.dk_x;
  if (est.dk_y > zero_extent_tolerance) est.rho_y = 2.0 * pi / est.dk_y;
  return est;
}

/// Area of the coverage hull (rad^2/m^2).
inline double coverage_area(const WavenumberRegion &region) {
  const auto hull = convex_hull(region.points());
  return polygon_area(hull);
}

/// Equivalent monostatic aperture giving cross-range resolution `rho_xr` at range `range_m`.
inline double aperture_for_cross_range(double range_m, double f0_hz, double psi, double rho_xr) {
  if (!(range_m > 0.0) || !(f0_hz > 0.0) || !(rho_xr > 0.0))
    throw ValidationError("range, carrier and resolution must be positive");
  const double s = std::sin(psi);
  if (std::abs(s) < 1e-12) throw GeometryError("endfire geometry: sin(psi) = 0");
  return speed_of_light * range_m / (2.0 * f0_hz * rho_xr * std::abs(s));
}

/// Resolution degradation factor of a bistatic pair with bistatic angle `alpha`.
inline double bistatic_loss(double alpha) {
  if (!(alpha >= 0.0)) throw ValidationError("bistatic angle must be non-negative");
  if (alpha >= pi) throw ValidationError("bistatic angle must be below pi (loss is unbounded)");
  return 1.0 / std::cos(0.5 * alpha);
}

} // namespace netsense
