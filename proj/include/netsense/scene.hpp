#pragma once

// Scenario and domain types shared by every stage of the pipeline.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/geometry.hpp"

namespace netsense {

/// Transmitting terminal index and receiving terminal index.
struct PairId {
  std::size_t tx = 0;
  std::size_t rx = 0;

  constexpr bool monostatic() const noexcept { return tx == rx; }
  friend constexpr auto operator<=>(const PairId &, const PairId &) = default;
};

/// One measurement channel: (tx terminal, rx terminal, tx element, rx element).
struct ChannelId {
  std::size_t tx_terminal = 0;
  std::size_t rx_terminal = 0;
  std::size_t tx_element = 0;
  std::size_t rx_element = 0;

  constexpr PairId pair() const noexcept { return {tx_terminal, rx_terminal}; }
  friend constexpr auto operator<=>(const ChannelId &, const ChannelId &) = default;
};

inline std::string to_string(PairId p);
inline std::string to_string(const ChannelId &c);

struct Terminal {
  int id = 0;
  Vec2 phase_center;
  std::vector<Vec2> tx_elements;
  std::vector<Vec2> rx_elements;

  friend bool operator==(const Terminal &, const Terminal &) = default;
};

struct PointTarget {
  Vec2 position;
  cplx reflectivity{1.0, 0.0};

  friend bool operator==(const PointTarget &, const PointTarget &) = default;
};

/// Dense square matrix, row-major.
template <typename T>
class SquareMatrix {
public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  T &operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  const T &operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

  friend bool operator==(const SquareMatrix &, const SquareMatrix &) = default;

private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

/// Binary L x L pairing of transmit terminals (rows) with receive terminals (columns).
class AssociationMatrix {
public:
  AssociationMatrix() = default;
  explicit AssociationMatrix(std::size_t n) : cells_(n, 0) {}

  static AssociationMatrix identity(std::size_t n) {
    AssociationMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }
  static AssociationMatrix full(std::size_t n) {
    AssociationMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.set(i, j);
    return m;
  }

  std::size_t size() const noexcept { return cells_.size(); }
  bool operator()(std::size_t tx, std::size_t rx) const { return cells_(tx, rx) != 0; }
  void set(std::size_t tx, std::size_t rx, bool on = true) { cells_(tx, rx) = on ? 1 : 0; }

  /// Active pairs in row-major order.
  std::vector<PairId> active_pairs() const {
    std::vector<PairId> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        if ((*this)(i, j)) out.push_back({i, j});
    return out;
  }
  std::size_t count() const { return active_pairs().size(); }

  friend bool operator==(const AssociationMatrix &, const AssociationMatrix &) = default;

private:
  SquareMatrix<std::uint8_t> cells_;
};

struct Scenario {
  std::vector<Terminal> terminals;
  std::vector<PointTarget> targets;
  double f0_hz = 0.0;
  double bandwidth_hz = 0.0;
  double noise_power = 0.0;          // per-sample complex variance
  SquareMatrix<double> sync_errors;  // seconds, [tx][rx]
  AssociationMatrix pairing;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return terminals.size(); }

  double sync_error(PairId p) const {
    return sync_errors.size() == 0 ? 0.0 : sync_errors(p.tx, p.rx);
  }
  Vec2 tx_element(const ChannelId &c) const { return terminals.at(c.tx_terminal).tx_elements.at(c.tx_element); }
  Vec2 rx_element(const ChannelId &c) const { return terminals.at(c.rx_terminal).rx_elements.at(c.rx_element); }

  /// Every (n, m) channel of an active pair, n outer and m inner.
  std::vector<ChannelId> channels(PairId p) const {
    std::vector<ChannelId> out;
    const auto &tx = terminals.at(p.tx);
    const auto &rx = terminals.at(p.rx);
    for (std::size_t n = 0; n < tx.tx_elements.size(); ++n)
      for (std::size_t m = 0; m < rx.rx_elements.size(); ++m) out.push_back({p.tx, p.rx, n, m});
    return out;
  }

  /// Channels of all active pairs, pairs in row-major order.
  std::vector<ChannelId> active_channels() const {
    std::vector<ChannelId> out;
    for (auto p : pairing.active_pairs()) {
      auto ch = channels(p);
      out.insert(out.end(), ch.begin(), ch.end());
    }
    return out;
  }

  /// Fills empty matrices with the documented defaults (zero sync errors, identity pairing).
  void apply_defaults() {
    if (sync_errors.size() == 0) sync_errors = SquareMatrix<double>(size(), 0.0);
    if (pairing.size() == 0) pairing = AssociationMatrix::identity(size());
  }

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// Pixel grid; `origin` is the centre of pixel (0, 0), x varies fastest.
struct ImageGrid {
  Vec2 origin;
  double dx = 0.0;
  double dy = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  std::size_t pixel_count() const noexcept { return nx * ny; }
  Vec2 position(std::size_t ix, std::size_t iy) const noexcept {
    return {origin.x + static_cast<double>(ix) * dx, origin.y + static_cast<double>(iy) * dy};
  }
  Vec2 last() const noexcept { return position(nx - 1, ny - 1); }

  bool contains(Vec2 p) const noexcept {
    const Vec2 hi = last();
    return p.x >= origin.x - 0.5 * dx && p.x <= hi.x + 0.5 * dx && p.y >= origin.y - 0.5 * dy &&
           p.y <= hi.y + 0.5 * dy;
  }

  /// Index of the pixel whose centre is nearest to `p`, if `p` is inside the grid.
  std::optional<std::pair<std::size_t, std::size_t>> nearest(Vec2 p) const {
    if (!contains(p)) return std::nullopt;
    auto clampi = [](double v, std::size_t n) {
      const auto i = static_cast<long long>(std::llround(v));
      return static_cast<std::size_t>(std::clamp<long long>(i, 0, static_cast<long long>(n) - 1));
    };
    return std::pair{clampi((p.x - origin.x) / dx, nx), clampi((p.y - origin.y) / dy, ny)};
  }

  /// Grid with `center` on a node and at least `half_x` / `half_y` of extent on each side.
  static ImageGrid centered(Vec2 center, double half_x, double half_y, double dx, double dy) {
    if (!(dx > 0.0) || !(dy > 0.0) || half_x < 0.0 || half_y < 0.0)
      throw ValidationError("grid spacing must be positive");
    const auto kx = static_cast<std::size_t>(std::ceil(half_x / dx - 1e-9));
    const auto ky = static_cast<std::size_t>(std::ceil(half_y / dy - 1e-9));
    return {{center.x - static_cast<double>(kx) * dx, center.y - static_cast<double>(ky) * dy},
            dx, dy, 2 * kx + 1, 2 * ky + 1};
  }

  friend bool operator==(const ImageGrid &, const ImageGrid &) = default;
};

inline std::string to_string(PairId p) { return std::to_string(p.tx) + "-" + std::to_string(p.rx); }

inline std::string to_string(const ChannelId &c) {
  return std::to_string(c.tx_terminal) + "-" + std::to_string(c.rx_terminal) + "-" +
         std::to_string(c.tx_element) + "-" + std::to_string(c.rx_element);
}

/// Lists every violated invariant; an empty result means the scenario is usable.
inline std::vector<std::string> validate(const Scenario &s) {
  std::vector<std::string> v;
  const std::size_t L = s.size();

  if (L == 0) v.emplace_back("scenario has no terminals");
  if (!std::isfinite(s.bandwidth_hz) || !(s.bandwidth_hz > 0.0)) v.emplace_back("bandwidth must be positive");
  if (!std::isfinite(s.f0_hz) || !(s.f0_hz > 0.5 * s.bandwidth_hz))
    v.emplace_back("f0 must exceed bandwidth/2");
  if (!std::isfinite(s.noise_power) || s.noise_power < 0.0) v.emplace_back("noise_power must be non-negative");

  std::set<int> ids;
  for (std::size_t i = 0; i < L; ++i) {
    const auto &t = s.terminals[i];
    const std::string name = "terminal[" + std::to_string(i) + "]";
    if (!ids.insert(t.id).second) v.push_back(name + " duplicates id " + std::to_string(t.id));
    if (t.tx_elements.empty() && t.rx_elements.empty()) v.push_back(name + " has no elements");
    if (!is_finite(t.phase_center)) v.push_back(name + " phase_center is not finite");
    for (const auto &e : t.tx_elements)
      if (!is_finite(e)) { v.push_back(name + " has a non-finite tx element"); break; }
    for (const auto &e : t.rx_elements)
      if (!is_finite(e)) { v.push_back(name + " has a non-finite rx element"); break; }
  }

  for (std::size_t i = 0; i < s.targets.size(); ++i) {
    const auto &t = s.targets[i];
    const std::string name = "target[" + std::to_string(i) + "]";
    if (!is_finite(t.position)) v.push_back(name + " position is not finite");
    if (!std::isfinite(t.reflectivity.real()) || !std::isfinite(t.reflectivity.imag()))
      v.push_back(name + " reflectivity is not finite");
    else if (!(std::abs(t.reflectivity) > 0.0))
      v.push_back(name + " reflectivity must be nonzero");
  }

  if (s.sync_errors.size() != L) {
    v.emplace_back("sync_errors must be " + std::to_string(L) + "x" + std::to_string(L));
  } else {
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j)
        if (!std::isfinite(s.sync_errors(i, j))) v.emplace_back("sync_errors contains a non-finite entry");
  }

  if (s.pairing.size() != L) {
    v.emplace_back("pairing must be " + std::to_string(L) + "x" + std::to_string(L));
  } else {
    const auto pairs = s.pairing.active_pairs();
    if (pairs.empty()) v.emplace_back("no active pair");
    for (auto p : pairs) {
      if (s.terminals[p.tx].tx_elements.empty())
        v.push_back("pair " + to_string(p) + " is active but terminal[" + std::to_string(p.tx) +
                    "] has no tx elements");
      if (s.terminals[p.rx].rx_elements.empty())
        v.push_back("pair " + to_string(p) + " is active but terminal[" + std::to_string(p.rx) +
                    "] has no rx elements");
    }
  }
  return v;
}

/// Throws ValidationError listing all violations, if any.
inline void require_valid(const Scenario &s) {
  const auto v = validate(s);
  if (v.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto &m : v) msg += " " + m + ";";
  throw ValidationError(msg);
}

} // namespace netsense
