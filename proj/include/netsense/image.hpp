#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "netsense/error.hpp"
#include "netsense/geometry.hpp"
#include "netsense/scene.hpp"

namespace netsense {

struct Provenance {
  std::optional<PairId> pair; // set for single-pair images
  std::string label;          // "pair:l-k", "fused:inc", "fused:coh", ...

  static Provenance of_pair(PairId p) { return {p, "pair:" + to_string(p)}; }
  friend bool operator==(const Provenance &, const Provenance &) = default;
};

/// Complex image on a grid; pixels are row-major (iy * nx + ix).
struct ComplexImage {
  ImageGrid grid;
  std::vector<cplx> pixels;
  Provenance provenance;

  ComplexImage() = default;
  ComplexImage(ImageGrid g, Provenance p) : grid(g), pixels(g.pixel_count()), provenance(std::move(p)) {}

  cplx &at(std::size_t ix, std::size_t iy) { return pixels[iy * grid.nx + ix]; }
  const cplx &at(std::size_t ix, std::size_t iy) const { return pixels[iy * grid.nx + ix]; }
  double magnitude(std::size_t ix, std::size_t iy) const { return std::abs(at(ix, iy)); }

  /// Checks that the pixel array matches the grid and every value is finite.
  void check() const {
    if (grid.nx == 0 || grid.ny == 0 || !(grid.dx > 0.0) || !(grid.dy > 0.0))
      throw ValidationError("image grid must have positive spacing and at least one pixel");
    if (pixels.size() != grid.pixel_count()) throw ValidationError("pixel array does not match the grid");
    for (const auto &v : pixels)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ValidationError("image holds non-finite pixels");
  }

  friend bool operator==(const ComplexImage &, const ComplexImage &) = default;
};

} // namespace netsense
