#pragma once

// Reference geometries: sensing terminals made of one Tx at the phase centre
// and a half-wavelength Rx ULA, and the five-terminal lane scene.

#include <cmath>
#include <cstddef>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/geometry.hpp"
#include "netsense/scene.hpp"
#include "netsense/wavenumber.hpp"

namespace netsense {

/// `count` points spaced by `spacing` along `dir`, centred on `centre`.
inline std::vector<Vec2> uniform_linear_array(Vec2 centre, std::size_t count, double spacing, Vec2 dir = {1.0, 0.0}) {
  if (count == 0) throw ValidationError("array needs at least one element");
  const double len = norm(dir);
  if (!(len > 0.0)) throw ValidationError("array direction must be nonzero");
  dir = (1.0 / len) * dir;
  std::vector<Vec2> out;
  out.reserve(count);
  const double mid = 0.5 * static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(centre + ((static_cast<double>(i) - mid) * spacing) * dir);
  return out;
}

/// Rx elements at lambda/2 needed so that one central Tx plus the Rx array
/// synthesize a virtual monostatic aperture of length `aperture`.
inline std::size_t rx_count_for_virtual_aperture(double aperture, double f0_hz) {
  if (!(aperture >= 0.0) || !(f0_hz > 0.0)) throw ValidationError("aperture and carrier must be positive");
  return static_cast<std::size_t>(std::floor(2.0 * aperture / (0.5 * wavelength(f0_hz)) + 1e-9)) + 1;
}

/// One Tx at `centre`, Rx ULA at lambda/2 along `dir` sized for `aperture`.
inline Terminal sensing_terminal(int id, Vec2 centre, double aperture, double f0_hz, Vec2 dir = {1.0, 0.0}) {
  Terminal t;
  t.id = id;
  t.phase_center = centre;
  t.tx_elements = {centre};
  t.rx_elements =
      uniform_linear_array(centre, rx_count_for_virtual_aperture(aperture, f0_hz), 0.5 * wavelength(f0_hz), dir);
  return t;
}

struct LaneConfig {
  std::size_t terminals = 5;
  double spacing_m = 0.7;
  Vec2 target{0.0, 20.0};
  double f0_hz = 28e9;
  double bandwidth_hz = 500e6;
  double design_resolution_m = 0.30; // cross-range resolution each terminal is sized for
};

/// Terminals on the x axis, centred on x = 0, looking at a single unit target.
/// Each aperture gives the design cross-range resolution at the target range.
inline Scenario lane_scenario(const LaneConfig &cfg = {}) {
  Scenario s;
  s.f0_hz = cfg.f0_hz;
  s.bandwidth_hz = cfg.bandwidth_hz;
  const double range = norm(cfg.target);
  const double aperture = aperture_for_cross_range(range, cfg.f0_hz, 0.5 * pi, cfg.design_resolution_m);
  const double mid = 0.5 * static_cast<double>(cfg.terminals - 1);
  for (std::size_t i = 0; i < cfg.terminals; ++i) {
    const Vec2 c{(static_cast<double>(i) - mid) * cfg.spacing_m, 0.0};
    s.terminals.push_back(sensing_terminal(static_cast<int>(i + 1), c, aperture, cfg.f0_hz));
  }
  s.targets = {PointTarget{cfg.target, {1.0, 0.0}}};
  s.apply_defaults();
  return s;
}

} // namespace netsense
