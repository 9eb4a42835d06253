#pragma once

#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/image.hpp"
#include "netsense/scene.hpp"

namespace netsense {

/// Non-negative weight per pair image.
struct FusionWeights {
  std::map<PairId, double> values;

  double at(PairId p) const {
    const auto it = values.find(p);
    if (it == values.end()) throw ValidationError("no fusion weight for pair " + to_string(p));
    return it->second;
  }

  void check() const {
    bool any = false;
    for (const auto &[p, w] : values) {
      if (!std::isfinite(w) || w < 0.0) throw ValidationError("fusion weight of pair " + to_string(p) + " is negative");
      any |= w > 0.0;
    }
    if (!any) throw ValidationError("at least one fusion weight must be positive");
  }

  /// 1/N for each of the N images.
  static FusionWeights uniform(std::span<const ComplexImage> images);

  /// Weights inversely proportional to the number of pairs sharing a virtual
  /// phase centre, (tx phase centre + rx phase centre)/2, normalized to sum 1.
  /// Reciprocal pairs (l,k) and (k,l) land on one centre and share its weight.
  static FusionWeights equalized(const Scenario &s, std::span<const ComplexImage> images, double tolerance_m = 1e-3);
};

namespace detail {

inline PairId pair_of(const ComplexImage &img) {
  if (!img.provenance.pair)
    throw ValidationError("image '" + img.provenance.label + "' has no pair provenance and cannot be fused");
  return *img.provenance.pair;
}

inline void check_same_grid(std::span<const ComplexImage> images) {
  if (images.empty()) throw ValidationError("no image to fuse");
  for (const auto &img : images) {
    if (!(img.grid == images.front().grid)) throw ValidationError("images to fuse must share one grid");
    if (img.pixels.size() != img.grid.pixel_count()) throw ValidationError("pixel array does not match the grid");
  }
}

} // namespace detail

inline FusionWeights FusionWeights::uniform(std::span<const ComplexImage> images) {
  FusionWeights w;
  const double v = images.empty() ? 0.0 : 1.0 / static_cast<double>(images.size());
  for (const auto &img : images) w.values[detail::pair_of(img)] = v;
  return w;
}

inline FusionWeights FusionWeights::equalized(const Scenario &s, std::span<const ComplexImage> images,
                                              double tolerance_m) {
  std::vector<PairId> pairs;
  std::vector<Vec2> centres;
  for (const auto &img : images) {
    const PairId p = detail::pair_of(img);
    if (p.tx >= s.size() || p.rx >= s.size()) throw ValidationError("pair " + to_string(p) + " is outside the scenario");
    pairs.push_back(p);
    centres.push_back(0.5 * (s.terminals[p.tx].phase_center + s.terminals[p.rx].phase_center));
  }
  std::vector<double> raw(pairs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::size_t shared = 0;
    for (const auto &c : centres)
      if (distance(c, centres[i]) <= tolerance_m) ++shared;
    raw[i] = 1.0 / static_cast<double>(shared);
    total += raw[i];
  }
  FusionWeights w;
  for (std::size_t i = 0; i < pairs.size(); ++i) w.values[pairs[i]] = raw[i] / total;
  return w;
}

/// Weighted sum of magnitudes of monostatic images; the result is real.
inline ComplexImage fuse_incoherent(std::span<const ComplexImage> images, const FusionWeights &weights) {
  detail::check_same_grid(images);
  weights.check();
  for (const auto &img : images)
    if (!detail::pair_of(img).monostatic())
      throw ValidationError("incoherent fusion takes monostatic images only; got pair " +
                            to_string(detail::pair_of(img)));
  ComplexImage out(images.front().grid, {std::nullopt, "fused:inc"});
  for (const auto &img : images) {
    const double w = weights.at(detail::pair_of(img));
    for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] += w * std::abs(img.pixels[i]);
  }
  return out;
}

/// Weighted complex sum of any mix of monostatic and bistatic images.
inline ComplexImage fuse_coherent(std::span<const ComplexImage> images, const FusionWeights &weights) {
  detail::check_same_grid(images);
  weights.check();
  ComplexImage out(images.front().grid, {std::nullopt, "fused:coh"});
  for (const auto &img : images) {
    const double w = weights.at(detail::pair_of(img));
    for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] += w * img.pixels[i];
  }
  return out;
}

/// Images whose pair is switched on in `pairing`.
inline std::vector<ComplexImage> select_pairs(const AssociationMatrix &pairing, std::span<const ComplexImage> images) {
  std::vector<ComplexImage> out;
  for (const auto &img : images) {
    if (!img.provenance.pair) continue;
    const PairId p = *img.provenance.pair;
    if (p.tx < pairing.size() && p.rx < pairing.size() && pairing(p.tx, p.rx)) out.push_back(img);
  }
  return out;
}

} // namespace netsense
