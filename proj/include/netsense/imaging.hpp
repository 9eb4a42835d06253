#pragma once

// Time-domain back-projection.
//
//   I_lk(x) = sum_n sum_m y_nm(tau_nm(x)) * exp(+j 2 pi f0 tau_nm(x))
//
// tau_nm(x) is the geometric bistatic delay of pixel x. Clock offsets are not
// compensated.

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/fusion.hpp"
#include "netsense/image.hpp"
#include "netsense/parallel.hpp"
#include "netsense/scene.hpp"
#include "netsense/synth.hpp"
#include "netsense/wavenumber.hpp"

namespace netsense {

enum class Interpolation { linear, sinc };

/// Half-width (taps per side) of the Lanczos kernel used by Interpolation::sinc.
inline constexpr int sinc_taps = 8;

struct BackprojectOptions {
  Interpolation interp = Interpolation::linear;
  unsigned workers = 0; // 0: one per hardware thread
};

/// Record value at time t. Throws WindowError if t needs samples outside the record.
inline cplx sample_at(const SignalRecord &r, double t, Interpolation interp = Interpolation::linear) {
  const double pos = (t - r.t0) * r.fs;
  const auto n = static_cast<double>(r.samples.size());
  if (interp == Interpolation::linear) {
    if (!(pos >= 0.0) || !(pos <= n - 1.0)) throw WindowError("time outside record window");
    const auto i = std::min(static_cast<std::size_t>(pos), r.samples.size() - 2);
    const double u = pos - static_cast<double>(i);
    return (1.0 - u) * r.samples[i] + u * r.samples[i + 1];
  }
  const double base = std::floor(pos);
  if (!(base - (sinc_taps - 1) >= 0.0) || !(base + sinc_taps <= n - 1.0)) throw WindowError("time outside record window");
  const auto i0 = static_cast<std::size_t>(base);
  cplx acc{};
  for (int k = -(sinc_taps - 1); k <= sinc_taps; ++k) {
    const auto idx = static_cast<std::size_t>(static_cast<long long>(i0) + k);
    const double d = pos - static_cast<double>(idx);
    acc += (sinc(d) * sinc(d / sinc_taps)) * r.samples[idx];
  }
  return acc;
}

/// Image of one pair from its records.
inline ComplexImage backproject(std::span<const SignalRecord> records, const Scenario &s, const ImageGrid &grid,
                                const BackprojectOptions &opt = {}) {
  if (records.empty()) throw ValidationError("backproject needs at least one record");
  if (grid.nx == 0 || grid.ny == 0 || !(grid.dx > 0.0) || !(grid.dy > 0.0))
    throw ValidationError("grid must have positive spacing and at least one pixel");
  const PairId pair = records.front().channel.pair();

  struct Geometry {
    Vec2 tx, rx;
  };
  std::vector<Geometry> geo;
  geo.reserve(records.size());
  for (const auto &r : records) {
    if (r.channel.pair() != pair) throw ValidationError("records of one image must belong to a single pair");
    if (r.samples.size() < 2 || !(r.fs > 0.0)) throw ValidationError("record " + to_string(r.channel) + " is empty");
    if (pair.tx >= s.size() || pair.rx >= s.size() || !s.pairing(pair.tx, pair.rx))
      throw ValidationError("pair " + to_string(pair) + " is not active");
    geo.push_back({s.tx_element(r.channel), s.rx_element(r.channel)});
  }

  ComplexImage img(grid, Provenance::of_pair(pair));
  const double w0 = 2.0 * pi * s.f0_hz;
  std::vector<std::exception_ptr> row_error(grid.ny);

  parallel_for(grid.ny, opt.workers, [&](std::size_t iy) {
    std::size_t ix = 0, ir = 0;
    try {
      for (ix = 0; ix < grid.nx; ++ix) {
        const Vec2 p = grid.position(ix, iy);
        cplx acc{};
        for (ir = 0; ir < records.size(); ++ir) {
          const Vec2 a = p - geo[ir].tx, b = p - geo[ir].rx;
          const double tau = (std::sqrt(a.x * a.x + a.y * a.y) + std::sqrt(b.x * b.x + b.y * b.y)) / speed_of_light;
          const double ph = w0 * tau;
          acc += sample_at(records[ir], tau, opt.interp) * cplx{std::cos(ph), std::sin(ph)};
        }
        img.at(ix, iy) = acc;
      }
    } catch (const WindowError &) {
      const Vec2 p = grid.position(ix, iy);
      row_error[iy] = std::make_exception_ptr(
          WindowError("pixel (" + std::to_string(ix) + ", " + std::to_string(iy) + ") at [" + std::to_string(p.x) +
                      ", " + std::to_string(p.y) + "] has a delay outside the window of channel " +
                      to_string(records[ir].channel)));
    } catch (...) {
      row_error[iy] = std::current_exception();
    }
  });
  for (const auto &e : row_error)
    if (e) std::rethrow_exception(e);
  return img;
}

/// One image per pair found in `records`, in order of first appearance.
inline std::vector<ComplexImage> image_pairs(std::span<const SignalRecord> records, const Scenario &s,
                                             const ImageGrid &grid, const BackprojectOptions &opt = {}) {
  std::vector<PairId> order;
  std::map<PairId, std::vector<SignalRecord>> groups;
  for (const auto &r : records) {
    auto &g = groups[r.channel.pair()];
    if (g.empty()) order.push_back(r.channel.pair());
    g.push_back(r);
  }
  std::vector<ComplexImage> out;
  out.reserve(order.size());
  for (auto p : order) out.push_back(backproject(groups[p], s, grid, opt));
  return out;
}

/// Sampling rate used by the convenience pipelines.
inline double default_sampling_rate(const Scenario &s) { return default_oversampling * s.bandwidth_hz; }

/// Scene with a single noiseless unit target at `target`, same sensors and pairing.
inline Scenario probe_scenario(Scenario s, Vec2 target) {
  s.targets = {PointTarget{target, {1.0, 0.0}}};
  s.noise_power = 0.0;
  return s;
}

/// Per-pair images of a scene: synthesize then back-project every active pair.
inline std::vector<ComplexImage> simulate_images(const Scenario &s, const ImageGrid &grid,
                                                 const BackprojectOptions &opt = {}) {
  const auto window = acquisition_window(s, grid);
  const auto records = synthesize(s, window, default_sampling_rate(s));
  return image_pairs(records, s, grid, opt);
}

/// Point spread function: noiseless unit target at `target`, every active pair
/// imaged, then coherently fused with the given weights (uniform if absent).
inline ComplexImage point_spread(const Scenario &s, Vec2 target, const ImageGrid &grid,
                                 const std::optional<FusionWeights> &weights = std::nullopt,
                                 const BackprojectOptions &opt = {}) {
  const Scenario probe = probe_scenario(s, target);
  const auto images = simulate_images(probe, grid, opt);
  return fuse_coherent(images, weights ? *weights : FusionWeights::uniform(images));
}

/// Grid with spacing min(rho)/4 centred on the targets' bounding box, extending
/// `cells` predicted resolution cells beyond it on each side.
inline ImageGrid default_grid(const Scenario &s, double cells = 8.0) {
  require_valid(s);
  if (s.targets.empty()) throw ValidationError("default grid needs at least one target");
  Vec2 lo = s.targets.front().position, hi = lo;
  for (const auto &t : s.targets) {
    lo = {std::min(lo.x, t.position.x), std::min(lo.y, t.position.y)};
    hi = {std::max(hi.x, t.position.x), std::max(hi.y, t.position.y)};
  }
  const Vec2 centre = 0.5 * (lo + hi);
  const auto est = predicted_resolution(coverage_region(s, centre));
  if (!est.rho_x && !est.rho_y) throw ValidationError("predicted resolution is unbounded on both axes");
  const double rx = est.rho_x.value_or(*est.rho_y);
  const double ry = est.rho_y.value_or(*est.rho_x);
  const double step = 0.25 * std::min(rx, ry);
  const double reach = cells * std::max(rx, ry);
  return ImageGrid::centered(centre, 0.5 * (hi.x - lo.x) + reach, 0.5 * (hi.y - lo.y) + reach, step, step);
}

} // namespace netsense
