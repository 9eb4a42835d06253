#pragma once

// Forward model: range-compressed complex baseband returns of point targets.
//
//   y(t) = sum_targets beta * sinc(B (t - tau - dt)) * exp(-j 2 pi f0 (tau + dt)) + z(t)
//
// sinc is the normalized sinc, i.e. the matched-filter output of a flat
// spectrum pulse of bandwidth B. z is circular complex Gaussian of variance
// noise_power, drawn from a stream keyed by (seed, l, k, n, m).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/geometry.hpp"
#include "netsense/scene.hpp"

namespace netsense {

/// Samples per second per Hz of bandwidth used when no rate is given.
inline constexpr double default_oversampling = 10.0;

/// Guard around every target response, in units of 1/B.
inline constexpr double response_margin_bandwidths = 4.0;

inline double sinc(double x) noexcept {
  if (x == 0.0) return 1.0;
  const double px = pi * x;
  return std::sin(px) / px;
}

inline double bistatic_delay(Vec2 tx_el, Vec2 rx_el, Vec2 target) noexcept {
  return (distance(target, tx_el) + distance(rx_el, target)) / speed_of_light;
}

enum class PathLoss { none, spherical };

/// Lumped scattering amplitude of a target for one Tx/Rx pair.
inline cplx apply_rcs(double path_tx, double path_rx, cplx reflectivity, PathLoss mode = PathLoss::none) {
  if (mode == PathLoss::none) return reflectivity;
  if (!(path_tx > 0.0) || !(path_rx > 0.0)) throw ValidationError("path lengths must be positive");
  return reflectivity / (path_tx * path_rx);
}

struct TimeWindow {
  double t_min = 0.0;
  double t_max = 0.0;
};

struct SignalRecord {
  ChannelId channel;
  double t0 = 0.0; // time of samples[0]
  double fs = 0.0; // complex sampling rate
  std::vector<cplx> samples;

  double t_end() const noexcept { return t0 + static_cast<double>(samples.size() - 1) / fs; }
  double time(std::size_t i) const noexcept { return t0 + static_cast<double>(i) / fs; }
};

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t channel_seed(std::uint64_t seed, const ChannelId &c) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t v : {c.tx_terminal, c.rx_terminal, c.tx_element, c.rx_element}) h = mix64(h ^ mix64(v));
  return h;
}

namespace detail {

inline void check_rate(const Scenario &s, double fs) {
  if (!std::isfinite(fs) || fs < s.bandwidth_hz)
    throw ValidationError("sampling rate must be at least the bandwidth (complex Nyquist)");
}

inline std::size_t sample_count(const TimeWindow &w, double fs) {
  if (!(w.t_max > w.t_min)) throw ValidationError("time window must satisfy t_min < t_max");
  const double n = std::floor((w.t_max - w.t_min) * fs + 1e-9) + 1.0;
  if (n > 5e8) throw ValidationError("time window holds too many samples");
  return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

inline bool pair_active(const Scenario &s, PairId p) {
  return p.tx < s.size() && p.rx < s.size() && s.pairing(p.tx, p.rx);
}

} // namespace detail

/// Record of one channel. The window must contain every target delay with a
/// margin of 4/B on both sides.
inline SignalRecord synthesize_channel(const Scenario &s, const ChannelId &ch, const TimeWindow &window, double fs,
                                       PathLoss loss = PathLoss::none) {
  require_valid(s);
  detail::check_rate(s, fs);
  if (!detail::pair_active(s, ch.pair())) throw ValidationError("channel " + to_string(ch) + " is not active");
  if (ch.tx_element >= s.terminals[ch.tx_terminal].tx_elements.size() ||
      ch.rx_element >= s.terminals[ch.rx_terminal].rx_elements.size())
    throw ValidationError("channel " + to_string(ch) + " refers to a missing element");

  SignalRecord rec;
  rec.channel = ch;
  rec.t0 = window.t_min;
  rec.fs = fs;
  rec.samples.assign(detail::sample_count(window, fs), cplx{});

  const Vec2 tx = s.tx_element(ch);
  const Vec2 rx = s.rx_element(ch);
  const Vec2 tx_pc = s.terminals[ch.tx_terminal].phase_center;
  const Vec2 rx_pc = s.terminals[ch.rx_terminal].phase_center;
  const double dt = s.sync_error(ch.pair());
  const double margin = response_margin_bandwidths / s.bandwidth_hz;

  for (const auto &target : s.targets) {
    const double delay = bistatic_delay(tx, rx, target.position) + dt;
    if (delay - margin < window.t_min || delay + margin > window.t_max)
      throw WindowError("time window truncates the response of a target on channel " + to_string(ch));
    const cplx beta =
        apply_rcs(distance(target.position, tx_pc), distance(rx_pc, target.position), target.reflectivity, loss);
    const cplx a = beta * std::polar(1.0, -2.0 * pi * s.f0_hz * delay);
    for (std::size_t i = 0; i < rec.samples.size(); ++i)
      rec.samples[i] += a * sinc(s.bandwidth_hz * (rec.time(i) - delay));
  }

  if (s.noise_power > 0.0) {
    std::mt19937_64 rng(channel_seed(s.seed, ch));
    std::normal_distribution<double> z(0.0, std::sqrt(0.5 * s.noise_power));
    for (auto &v : rec.samples) {
      const double re = z(rng);
      const double im = z(rng);
      v += cplx{re, im};
    }
  }
  return rec;
}

/// One record per active channel, pairs row-major, elements n outer and m inner.
inline std::vector<SignalRecord> synthesize(const Scenario &s, const TimeWindow &window, double fs,
                                            PathLoss loss = PathLoss::none) {
  require_valid(s);
  std::vector<SignalRecord> out;
  for (const auto &ch : s.active_channels()) out.push_back(synthesize_channel(s, ch, window, fs, loss));
  return out;
}

/// Records of one pair only.
inline std::vector<SignalRecord> synthesize_pair(const Scenario &s, PairId pair, const TimeWindow &window, double fs,
                                                 PathLoss loss = PathLoss::none) {
  if (!detail::pair_active(s, pair)) throw ValidationError("pair " + to_string(pair) + " is not active");
  std::vector<SignalRecord> out;
  for (const auto &ch : s.channels(pair)) out.push_back(synthesize_channel(s, ch, window, fs, loss));
  return out;
}

namespace detail {

inline double min_distance_to_box(Vec2 p, Vec2 lo, Vec2 hi) {
  const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
  const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
  return std::hypot(dx, dy);
}

inline double max_distance_to_box(Vec2 p, Vec2 lo, Vec2 hi) {
  return std::max({distance(p, lo), distance(p, hi), distance(p, {lo.x, hi.y}), distance(p, {hi.x, lo.y})});
}

} // namespace detail

/// Window spanning every pixel delay and every target delay of the active
/// channels, widened by `margin_bandwidths` / B on both sides.
inline TimeWindow acquisition_window(const Scenario &s, const ImageGrid &grid, double margin_bandwidths = 12.0) {
  require_valid(s);
  if (grid.nx == 0 || grid.ny == 0) throw ValidationError("grid must have at least one pixel");
  Vec2 lo = grid.origin;
  Vec2 hi = grid.last();
  for (const auto &t : s.targets) {
    lo = {std::min(lo.x, t.position.x), std::min(lo.y, t.position.y)};
    hi = {std::max(hi.x, t.position.x), std::max(hi.y, t.position.y)};
  }

  double t_min = std::numeric_limits<double>::infinity();
  double t_max = -t_min;
  for (const auto pair : s.pairing.active_pairs()) {
    const auto &tx = s.terminals[pair.tx].tx_elements;
    const auto &rx = s.terminals[pair.rx].rx_elements;
    double tx_near = t_min, tx_far = 0.0, rx_near = t_min, rx_far = 0.0;
    for (auto p : tx) {
      tx_near = std::min(tx_near, detail::min_distance_to_box(p, lo, hi));
      tx_far = std::max(tx_far, detail::max_distance_to_box(p, lo, hi));
    }
    for (auto p : rx) {
      rx_near = std::min(rx_near, detail::min_distance_to_box(p, lo, hi));
      rx_far = std::max(rx_far, detail::max_distance_to_box(p, lo, hi));
    }
    const double dt = s.sync_error(pair);
    t_min = std::min(t_min, (tx_near + rx_near) / speed_of_light + dt);
    t_max = std::max(t_max, (tx_far + rx_far) / speed_of_light + dt);
  }
  const double margin = margin_bandwidths / s.bandwidth_hz;
  return {t_min - margin, t_max + margin};
}

} // namespace netsense
