#pragma once

// Acquisition planning: wavenumber tessellation and greedy terminal selection.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/geometry.hpp"
#include "netsense/presets.hpp"
#include "netsense/scene.hpp"
#include "netsense/wavenumber.hpp"

namespace netsense {

/// Observation angles whose monostatic tiles abut along k_y:
///   sin(psi_l) (f0 + B/2) = sin(psi_{l-1}) (f0 - B/2).
/// Angles stay on the same side of broadside as psi_0.
inline std::vector<double> tessellation_angles(double psi0, double f0_hz, double bandwidth_hz, std::size_t L) {
  if (!(bandwidth_hz > 0.0) || !(f0_hz > 0.5 * bandwidth_hz)) throw ValidationError("need f0 > B/2 > 0");
  if (L < 1) throw ValidationError("need at least one angle");
  if (!std::isfinite(psi0)) throw ValidationError("psi_0 must be finite");
  const double ratio = (f0_hz - 0.5 * bandwidth_hz) / (f0_hz + 0.5 * bandwidth_hz);
  const bool back = std::cos(psi0) < 0.0;
  std::vector<double> out{psi0};
  double s = std::sin(psi0);
  for (std::size_t l = 1; l < L; ++l) {
    s *= ratio;
    out.push_back(back ? pi - std::asin(s) : std::asin(s));
  }
  return out;
}

/// Sensor positions at `range` from the target, each seeing it along psi.
inline std::vector<Vec2> angles_to_positions(const std::vector<double> &angles, Vec2 target, double range) {
  if (!(range > 0.0)) throw ValidationError("stand-off range must be positive");
  std::vector<Vec2> out;
  out.reserve(angles.size());
  for (double a : angles) out.push_back(target - range * direction(a));
  return out;
}

enum class Objective { extent_y, extent_x, extent_sum };

inline const char *to_string(Objective o) {
  switch (o) {
  case Objective::extent_y: return "extent_y";
  case Objective::extent_x: return "extent_x";
  case Objective::extent_sum: return "extent_sum";
  }
  return "extent_y";
}

enum class PairingMode { identity, full };

struct OrchestrationPlan {
  std::vector<std::size_t> terminals; // indices into `scenario.terminals`, ordered like `angles`
  std::vector<double> angles;         // rad, sorted by decreasing sin(psi)
  std::vector<Vec2> positions;
  AssociationMatrix pairing;          // over all terminals of `scenario`
  ResolutionEstimate predicted;
  Scenario scenario;                  // scenario to simulate, carrying `pairing`
};

namespace detail {

inline double objective_value(const ResolutionEstimate &e, Objective o) {
  switch (o) {
  case Objective::extent_y: return e.dk_y;
  case Objective::extent_x: return e.dk_x;
  case Objective::extent_sum: return e.dk_x + e.dk_y;
  }
  return e.dk_y;
}

inline AssociationMatrix subset_pairing(std::size_t L, const std::vector<std::size_t> &sel, PairingMode mode) {
  AssociationMatrix m(L);
  for (auto a : sel)
    for (auto b : sel)
      if (mode == PairingMode::full || a == b) m.set(a, b);
  return m;
}

inline bool has_active_pair(const Scenario &s, const AssociationMatrix &m) {
  for (auto p : m.active_pairs())
    if (!s.terminals[p.tx].tx_elements.empty() && !s.terminals[p.rx].rx_elements.empty()) return true;
  return false;
}

// Drops active pairs that lack tx or rx elements.
inline AssociationMatrix usable(const Scenario &s, AssociationMatrix m) {
  for (auto p : m.active_pairs())
    if (s.terminals[p.tx].tx_elements.empty() || s.terminals[p.rx].rx_elements.empty()) m.set(p.tx, p.rx, false);
  return m;
}

inline void finish_plan(OrchestrationPlan &plan, Vec2 target, std::size_t n_freq) {
  const auto &s = plan.scenario;
  std::vector<std::pair<double, std::size_t>> order;
  for (auto i : plan.terminals) order.emplace_back(observation_angle(s.terminals[i].phase_center, target), i);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto &a, const auto &b) { return std::sin(a.first) > std::sin(b.first); });
  plan.terminals.clear();
  plan.angles.clear();
  plan.positions.clear();
  for (const auto &[a, i] : order) {
    plan.terminals.push_back(i);
    plan.angles.push_back(a);
    plan.positions.push_back(s.terminals[i].phase_center);
  }
  plan.predicted = predicted_resolution(coverage_region(s, target, n_freq));
}

} // namespace detail

/// Greedy selection of `L_active` terminals maximizing the chosen hull extent.
/// Each step adds the terminal with the largest objective; ties go to the
/// lowest index. Selected terminals are paired per `mode`.
inline OrchestrationPlan plan(const Scenario &s, Vec2 target, std::size_t L_active,
                              Objective objective = Objective::extent_y, PairingMode mode = PairingMode::full,
                              std::size_t n_freq = default_frequency_samples) {
  if (L_active < 1 || L_active > s.size())
    throw ValidationError("L_active must lie in [1, " + std::to_string(s.size()) + "]");
  std::vector<std::size_t> chosen;
  std::vector<bool> used(s.size(), false);
  Scenario trial = s;
  for (std::size_t step = 0; step < L_active; ++step) {
    std::optional<std::size_t> best;
    double best_val = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (used[i]) continue;
      auto sel = chosen;
      sel.push_back(i);
      trial.pairing = detail::usable(s, detail::subset_pairing(s.size(), sel, mode));
      if (!detail::has_active_pair(s, trial.pairing)) continue;
      const double v = detail::objective_value(predicted_resolution(coverage_region(trial, target, n_freq)), objective);
      if (v > best_val) best_val = v, best = i;
    }
    if (!best) throw ValidationError("infeasible plan: no terminal adds an active pair");
    used[*best] = true;
    chosen.push_back(*best);
  }
  OrchestrationPlan out;
  out.terminals = chosen;
  out.scenario = s;
  out.scenario.pairing = detail::usable(s, detail::subset_pairing(s.size(), chosen, mode));
  out.pairing = out.scenario.pairing;
  detail::finish_plan(out, target, n_freq);
  return out;
}

struct TessellationConfig {
  double psi0 = 0.5 * pi;
  std::size_t count = 4;
  std::optional<double> range_m;     // default: distance from the first terminal to the target
  std::optional<double> aperture_m;  // default: equal x and y resolution at the stand-off range
  PairingMode pairing = PairingMode::identity;
};

/// Replaces the terminals of `base` with `count` sensing terminals on the
/// tessellation angles, each with its Rx ULA perpendicular to the line of sight.
inline OrchestrationPlan tessellated_plan(const Scenario &base, Vec2 target, const TessellationConfig &cfg = {},
                                          std::size_t n_freq = default_frequency_samples) {
  require_valid(base);
  const double range = cfg.range_m ? *cfg.range_m : distance(base.terminals.front().phase_center, target);
  const double aperture =
      cfg.aperture_m ? *cfg.aperture_m : aperture_for_cross_range(range, base.f0_hz, 0.5 * pi,
                                                                  speed_of_light / (2.0 * base.bandwidth_hz));
  const auto angles = tessellation_angles(cfg.psi0, base.f0_hz, base.bandwidth_hz, cfg.count);
  const auto positions = angles_to_positions(angles, target, range);

  OrchestrationPlan out;
  out.scenario = base;
  out.scenario.terminals.clear();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const Vec2 los = direction(angles[i]);
    out.scenario.terminals.push_back(
        sensing_terminal(static_cast<int>(i + 1), positions[i], aperture, base.f0_hz, {-los.y, los.x}));
  }
  out.scenario.sync_errors = SquareMatrix<double>(angles.size(), 0.0);
  std::vector<std::size_t> all(angles.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  out.scenario.pairing = detail::subset_pairing(angles.size(), all, cfg.pairing);
  out.pairing = out.scenario.pairing;
  out.terminals = all;
  require_valid(out.scenario);
  detail::finish_plan(out, target, n_freq);
  return out;
}

} // namespace netsense
