#pragma once

// Text and raster export. Every number is written with 9 significant digits
// and non-finite values become JSON null, so artifacts are byte-stable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "netsense/error.hpp"
#include "netsense/image.hpp"
#include "netsense/metrics.hpp"
#include "netsense/orchestrate.hpp"
#include "netsense/synth.hpp"
#include "netsense/wavenumber.hpp"

namespace netsense {

using json = nlohmann::json;

inline std::string format9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline double round9(double v) { return std::isfinite(v) ? std::strtod(format9(v).c_str(), nullptr) : v; }

/// Number rounded to 9 significant digits, null if not finite.
inline json num(double v) { return std::isfinite(v) ? json(round9(v)) : json(nullptr); }
inline json num(const std::optional<double> &v) { return v ? num(*v) : json(nullptr); }
inline json num(Vec2 v) { return json::array({num(v.x), num(v.y)}); }

inline std::string dump(const json &j) { return j.dump(2) + "\n"; }

// ---- coverage ------------------------------------------------------------

inline void write_coverage_csv(std::ostream &os, const WavenumberRegion &region) {
  os << "pair_id,k_x,k_y,f\n";
  for (const auto &t : region.tiles)
    for (std::size_t i = 0; i < t.samples.size(); ++i)
      os << to_string(t.channel) << ',' << format9(t.samples[i].x) << ',' << format9(t.samples[i].y) << ','
         << format9(t.freqs_hz[i]) << '\n';
}

inline void write_hull_csv(std::ostream &os, const std::vector<Vec2> &hull) {
  os << "k_x,k_y\n";
  for (auto v : hull) os << format9(v.x) << ',' << format9(v.y) << '\n';
}

inline json to_json(const ResolutionEstimate &e) {
  return {{"rho_x_m", num(e.rho_x)}, {"rho_y_m", num(e.rho_y)}, {"dk_x_rad_per_m", num(e.dk_x)},
          {"dk_y_rad_per_m", num(e.dk_y)}, {"hull_vertices", e.hull.size()}};
}

// ---- records -------------------------------------------------------------

/// One row per sample: channel, t, re, im.
inline void write_records_csv(std::ostream &os, const std::vector<SignalRecord> &records) {
  os << "channel,t,re,im\n";
  for (const auto &r : records)
    for (std::size_t i = 0; i < r.samples.size(); ++i)
      os << to_string(r.channel) << ',' << format9(r.time(i)) << ',' << format9(r.samples[i].real()) << ','
         << format9(r.samples[i].imag()) << '\n';
}

// ---- images --------------------------------------------------------------

inline void write_image_csv(std::ostream &os, const ComplexImage &img) {
  os << "x,y,re,im\n";
  for (std::size_t iy = 0; iy < img.grid.ny; ++iy)
    for (std::size_t ix = 0; ix < img.grid.nx; ++ix) {
      const Vec2 p = img.grid.position(ix, iy);
      const cplx v = img.at(ix, iy);
      os << format9(p.x) << ',' << format9(p.y) << ',' << format9(v.real()) << ',' << format9(v.imag()) << '\n';
    }
}

/// Reads an image written by write_image_csv. Rows must be row-major on a regular grid.
inline ComplexImage read_image_csv(std::istream &is, Provenance prov = {}) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,re,im", 0) != 0)
    throw ValidationError("image CSV must start with the header x,y,re,im");
  std::vector<double> xs, ys;
  std::vector<cplx> vals;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    double f[4];
    char comma;
    if (!(row >> f[0] >> comma >> f[1] >> comma >> f[2] >> comma >> f[3]))
      throw ValidationError("malformed image CSV row at line " + std::to_string(lineno));
    xs.push_back(f[0]);
    ys.push_back(f[1]);
    vals.emplace_back(f[2], f[3]);
  }
  if (vals.empty()) throw ValidationError("image CSV has no pixels");
  std::size_t nx = 1;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  if (vals.size() % nx != 0) throw ValidationError("image CSV rows do not form a rectangular grid");
  const std::size_t ny = vals.size() / nx;
  ImageGrid g{{xs[0], ys[0]}, nx > 1 ? xs[1] - xs[0] : 1.0, ny > 1 ? ys[nx] - ys[0] : 1.0, nx, ny};
  if (!(g.dx > 0.0) || !(g.dy > 0.0)) throw ValidationError("image CSV grid spacing must be positive");
  ComplexImage img(g, std::move(prov));
  img.pixels = std::move(vals);
  return img;
}

/// 8-bit PGM of 20 log10 |I| / max, clipped to [-dyn_range_db, 0], north up.
inline void write_pgm(std::ostream &os, const ComplexImage &img, double dyn_range_db = 40.0) {
  if (!(dyn_range_db > 0.0)) throw ValidationError("dynamic range must be positive");
  double peak = 0.0;
  for (const auto &v : img.pixels) peak = std::max(peak, std::abs(v));
  os << "P5\n" << img.grid.nx << ' ' << img.grid.ny << "\n255\n";
  for (std::size_t r = 0; r < img.grid.ny; ++r) {
    const std::size_t iy = img.grid.ny - 1 - r;
    for (std::size_t ix = 0; ix < img.grid.nx; ++ix) {
      const double m = std::abs(img.at(ix, iy));
      double db = peak > 0.0 && m > 0.0 ? 20.0 * std::log10(m / peak) : -dyn_range_db;
      db = std::clamp(db, -dyn_range_db, 0.0);
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (db + dyn_range_db) / dyn_range_db))));
    }
  }
}

// ---- metrics and plans ---------------------------------------------------

inline json to_json(const ImageMetrics &m) {
  return {{"peak_pos", num(m.peak_pos)},
          {"peak_val", json::array({num(m.peak_val.real()), num(m.peak_val.imag())})},
          {"rho_x_meas_m", num(m.rho_x_meas)},
          {"rho_y_meas_m", num(m.rho_y_meas)},
          {"pslr_db", num(m.pslr_db)},
          {"islr_db", num(m.islr_db)},
          {"peak_snr_db", num(m.peak_snr_db)},
          {"notes", m.notes}};
}

inline void write_metrics_csv_header(std::ostream &os) {
  os << "run,peak_x,peak_y,peak_abs,rho_x_meas,rho_y_meas,pslr_db,islr_db,peak_snr_db\n";
}

inline void write_metrics_csv_row(std::ostream &os, const std::string &run, const ImageMetrics &m) {
  auto opt = [](const std::optional<double> &v) { return v ? format9(*v) : std::string(); };
  os << run << ',' << format9(m.peak_pos.x) << ',' << format9(m.peak_pos.y) << ',' << format9(std::abs(m.peak_val))
     << ',' << opt(m.rho_x_meas) << ',' << opt(m.rho_y_meas) << ',' << opt(m.pslr_db) << ',' << opt(m.islr_db) << ','
     << opt(m.peak_snr_db) << '\n';
}

inline json pairing_json(const AssociationMatrix &m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.size(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.size(); ++c) row.push_back(m(r, c) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const OrchestrationPlan &p) {
  json angles = json::array(), positions = json::array();
  for (double a : p.angles) angles.push_back(num(rad2deg(a)));
  for (auto v : p.positions) positions.push_back(num(v));
  return {{"terminals", p.terminals},
          {"angles_deg", std::move(angles)},
          {"positions", std::move(positions)},
          {"pairing", pairing_json(p.pairing)},
          {"predicted", to_json(p.predicted)}};
}

inline json to_json(const ImageGrid &g) {
  return {{"origin", num(g.origin)}, {"dx", num(g.dx)}, {"dy", num(g.dy)}, {"nx", g.nx}, {"ny", g.ny}};
}

} // namespace netsense
