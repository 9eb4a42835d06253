// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of failures.
//
// Tolerances are fixed below; INFO lines report related figures that are not
// pass/fail criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "netsense/netsense.hpp"

using namespace netsense;

namespace tol {
constexpr double range_resolution = 0.15;     // relative
constexpr double cross_range = 0.15;          // relative
constexpr double aperture_m = 1e-3;           // absolute, against 0.357 m
constexpr double area = 0.02;                 // relative
constexpr double snr_gain_db = 1.0;           // absolute
constexpr int snr_trials = 100;
constexpr double grating_lobe_db = -10.0;     // coherent monostatic lobe must exceed this
constexpr double lobe_drop_db = 3.0;          // multistatic must lower the lobe by this much
constexpr double widening = 0.10;             // relative mainlobe widening allowed
constexpr double tessellation = 0.25;         // relative, against single/4
constexpr double abutment = 1e-12;            // relative to f0
constexpr double tess_ratio = 0.3;            // rho_y(tess) <= 0.3 rho_y(single)
constexpr double bistatic = 0.20;             // relative
constexpr double flat_db = 1.0;               // y-cut variation
constexpr double zero_dk = 0.01;              // fraction of the monostatic extent 4 pi B / c
constexpr double oracle = 1e-9;               // relative per pixel
constexpr double point_extent = 1e-6;         // rad/m
} // namespace tol

namespace {

int failures = 0;

void line(bool ok, const std::string &id, const std::string &what) {
  std::printf("%s  %-4s %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string &id, const std::string &what) {
  std::printf("INFO  %-4s %s\n", id.c_str(), what.c_str());
  std::fflush(stdout);
}

std::string f(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
std::string f(const char *fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

void timed(const char *name, const std::function<void()> &body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception &e) {
    line(false, name, std::string("exception: ") + e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  info(name, f("elapsed %.1f s", dt));
}

const Vec2 target{0.0, 20.0};

Scenario only_pair(Scenario s, std::size_t tx, std::size_t rx) {
  s.pairing = AssociationMatrix(s.size());
  s.pairing.set(tx, rx);
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---- 1, 2 ---------------------------------------------------------------

void resolution_criteria() {
  const auto lane = lane_scenario();
  const auto single = only_pair(lane, 2, 2);
  const auto psf = point_spread(single, target, ImageGrid::centered(target, 1.2, 1.2, 0.03, 0.03));

  const double rho_y = measure_resolution(psf, Axis::y);
  line(rel(rho_y, 0.30) <= tol::range_resolution, "1",
       f("range resolution %.4f m, expected 0.30 m +/- 15%%", rho_y));

  const double A = aperture_for_cross_range(20.0, 28e9, 0.5 * pi, 0.30);
  const double rho_x = measure_resolution(psf, Axis::x);
  line(std::abs(A - 0.357) <= tol::aperture_m && rel(rho_x, 0.30) <= tol::cross_range, "2",
       f("aperture %.4f m (%zu Rx at lambda/2), cross-range resolution %.4f m, expected 0.30 m +/- 15%%", A,
         lane.terminals[2].rx_elements.size(), rho_x));
}

// ---- 3 -------------------------------------------------------------------

void area_criterion() {
  // Straight monostatic aperture subtending 3 degrees at the target.
  const double dpsi = deg2rad(3.0);
  const double half = 20.0 * std::tan(0.5 * dpsi);
  Scenario s;
  s.f0_hz = 28e9;
  s.bandwidth_hz = 500e6;
  const int n = 61;
  for (int i = 0; i < n; ++i) {
    const Vec2 p{-half + 2.0 * half * i / (n - 1), 0.0};
    s.terminals.push_back({i + 1, p, {p}, {p}});
  }
  s.apply_defaults();
  const double area = coverage_area(coverage_region(s, target, 32));
  const double k = 4.0 * pi / speed_of_light;
  const double expected = k * k * s.f0_hz * s.bandwidth_hz * dpsi;
  line(rel(area, expected) <= tol::area, "3",
       f("hull area %.6g vs (4 pi/c)^2 f0 B dpsi = %.6g (rel. error %.2f%%, limit 2%%)", area, expected,
         100.0 * rel(area, expected)));
}

// ---- 4 -------------------------------------------------------------------

void snr_criterion() {
  auto s = lane_scenario();
  s.noise_power = 2.0;
  const auto g = ImageGrid::centered(target, 4.0, 4.0, 0.2, 0.2);
  const auto w = acquisition_window(s, g);
  const double cell = 0.30;
  double sum = 0.0, single_sum = 0.0;
  for (int t = 0; t < tol::snr_trials; ++t) {
    s.seed = 1000 + static_cast<std::uint64_t>(t);
    const auto imgs = image_pairs(synthesize(s, w, default_sampling_rate(s)), s, g);
    const std::vector<ComplexImage> one{imgs[2]};
    const double a = peak_snr(fuse_incoherent(one, FusionWeights::uniform(one)), target, cell);
    const double b = peak_snr(fuse_incoherent(imgs, FusionWeights::uniform(imgs)), target, cell);
    sum += b - a;
    single_sum += a;
  }
  const double gain = sum / tol::snr_trials;
  const double expected = 10.0 * std::log10(5.0);
  line(std::abs(gain - expected) <= tol::snr_gain_db, "4",
       f("incoherent 5-image peak-SNR gain %.2f dB over %d trials (single-image SNR %.1f dB), expected %.2f +/- 1 dB",
         gain, tol::snr_trials, single_sum / tol::snr_trials, expected));
}

// ---- 5 -------------------------------------------------------------------

void ladder_criterion() {
  const auto lane = lane_scenario();
  const auto g = ImageGrid::centered(target, 0.9, 0.6, 0.006, 0.03);

  double widest_single = 0.0, narrowest_single = 1e9;
  for (std::size_t l = 0; l < lane.size(); ++l) {
    const double r = measure_resolution(point_spread(only_pair(lane, l, l), target, g), Axis::x);
    widest_single = std::max(widest_single, r);
    narrowest_single = std::min(narrowest_single, r);
  }
  const auto mono = point_spread(lane, target, g);
  const double rho_mono = measure_resolution(mono, Axis::x);
  line(rho_mono < narrowest_single, "5a",
       f("coherent monostatic mainlobe %.4f m < narrowest single terminal %.4f m", rho_mono, narrowest_single));

  const double lobe_mono = pslr(mono);
  line(lobe_mono > tol::grating_lobe_db, "5b",
       f("coherent monostatic highest grating lobe %.2f dB > -10 dB", lobe_mono));

  Scenario full = lane;
  full.pairing = AssociationMatrix::full(lane.size());
  const auto imgs = simulate_images(probe_scenario(full, target), g);
  const auto eq = fuse_coherent(imgs, FusionWeights::equalized(full, imgs));
  const double lobe_eq = pslr(eq), rho_eq = measure_resolution(eq, Axis::x);
  line(lobe_eq <= lobe_mono - tol::lobe_drop_db && rho_eq <= (1.0 + tol::widening) * rho_mono, "5c",
       f("multistatic (equalized weights) lobe %.2f dB (drop %.2f dB >= 3), mainlobe %.4f m (%+.1f%%, limit +10%%)",
         lobe_eq, lobe_mono - lobe_eq, rho_eq, 100.0 * (rho_eq / rho_mono - 1.0)));

  const auto un = fuse_coherent(imgs, FusionWeights::uniform(imgs));
  const double lobe_un = pslr(un), rho_un = measure_resolution(un, Axis::x);
  info("5c", f("multistatic (uniform weights) lobe %.2f dB, mainlobe %.4f m (%+.1f%%)", lobe_un, rho_un,
               100.0 * (rho_un / rho_mono - 1.0)));
  info("5", f("ISLR coherent monostatic %.2f dB, multistatic equalized %.2f dB, uniform %.2f dB", islr(mono),
              islr(eq), islr(un)));
}

// ---- 6 -------------------------------------------------------------------

void tessellation_criterion() {
  const auto lane = lane_scenario({5, 0.7, target, 28e9, 100e6, 1.5});
  const auto g = ImageGrid::centered(target, 4.0, 4.0, 0.02, 0.05);
  const double single = measure_resolution(point_spread(only_pair(lane, 2, 2), target, g), Axis::y);

  const auto plan = tessellated_plan(lane, target);
  const auto tess = point_spread(plan.scenario, target, g);
  const double rho = measure_resolution(tess, Axis::y);

  double worst = 0.0;
  const double f0 = lane.f0_hz, B = lane.bandwidth_hz;
  for (std::size_t l = 1; l < plan.angles.size(); ++l)
    worst = std::max(worst, std::abs(std::sin(plan.angles[l]) * (f0 + B / 2) -
                                     std::sin(plan.angles[l - 1]) * (f0 - B / 2)) / f0);
  line(rel(rho, single / 4.0) <= tol::tessellation && worst <= tol::abutment, "6",
       f("tessellated rho_y %.4f m vs single/4 = %.4f m (%+.1f%%, limit 25%%); edge abutment %.1e (limit 1e-12)", rho,
         single / 4.0, 100.0 * (rho / (single / 4.0) - 1.0), worst));

  LobeOptions near;
  near.search_radius = 3.0;
  const double lobe_tess = pslr(tess, near);
  const double lobe_base = pslr(point_spread(lane, target, g), near);
  line(rho <= tol::tess_ratio * single && lobe_tess < lobe_base, "6b",
       f("rho_y ratio %.3f (<= 0.3); highest lobe within 3 m %.2f dB vs coherent monostatic lane %.2f dB", rho / single,
         lobe_tess, lobe_base));
  std::string angles;
  for (double a : plan.angles) angles += f(" %.3f", rad2deg(a));
  info("6", f("angles (deg):%s; predicted rho_y %.4f m; Rx per terminal %zu", angles.c_str(), *plan.predicted.rho_y,
              plan.scenario.terminals.front().rx_elements.size()));
}

// ---- 7 -------------------------------------------------------------------

Scenario bistatic_pair(double alpha, std::size_t rx_count) {
  // Tx and Rx at 20 m, symmetric about broadside; the Rx array is
  // perpendicular to its line of sight.
  Scenario s;
  s.f0_hz = 28e9;
  s.bandwidth_hz = 500e6;
  const Vec2 u_tx = direction(0.5 * pi + 0.5 * alpha), u_rx = direction(0.5 * pi - 0.5 * alpha);
  const Vec2 tx = target - 20.0 * u_tx, rx = target - 20.0 * u_rx;
  const double lambda = wavelength(s.f0_hz);
  Terminal R{2, rx, {}, uniform_linear_array(rx, rx_count, 0.5 * lambda, {-u_rx.y, u_rx.x})};
  if (alpha == 0.0) {
    R.tx_elements = {rx};
    s.terminals = {R};
    s.apply_defaults();
    return s;
  }
  s.terminals = {Terminal{1, tx, {tx}, {}}, R};
  s.apply_defaults();
  return only_pair(s, 0, 1);
}

void bistatic_criterion() {
  const auto g = ImageGrid::centered(target, 1.5, 1.5, 0.02, 0.02);
  const auto grid_y = ImageGrid::centered(target, 0.2, 1.5, 0.02, 0.01);
  const double ry0 = measure_resolution(point_spread(bistatic_pair(0.0, 3), target, grid_y), Axis::y);
  const double rx0 = measure_resolution(point_spread(bistatic_pair(0.0, 134), target, g), Axis::x);
  for (double deg : {60.0, 90.0}) {
    const double a = deg2rad(deg);
    const double expect = bistatic_loss(a);
    const double ry = measure_resolution(point_spread(bistatic_pair(a, 3), target, grid_y), Axis::y);
    const double ratio = ry / ry0;
    line(rel(ratio, expect) <= tol::bistatic, deg == 60.0 ? "7a" : "7b",
         f("alpha %.0f deg: rho_y ratio %.3f vs 1/cos(alpha/2) = %.3f (limit 20%%)", deg, ratio, expect));
    const double rx = measure_resolution(point_spread(bistatic_pair(a, 134), target, g), Axis::x);
    info(deg == 60.0 ? "7a" : "7b", f("with a 134-element Rx array: rho_x ratio %.3f", rx / rx0));
  }
}

// ---- 8 -------------------------------------------------------------------

void opposite_side_criterion() {
  Scenario s;
  s.f0_hz = 28e9;
  s.bandwidth_hz = 500e6;
  const double A = aperture_for_cross_range(20.0, s.f0_hz, 0.5 * pi, 0.30);
  Terminal tx{1, {0, 40}, {{0, 40}}, {}};
  Terminal rx = sensing_terminal(2, {0, 0}, A, s.f0_hz);
  rx.tx_elements.clear();
  s.terminals = {tx, rx};
  s.apply_defaults();
  s = only_pair(s, 0, 1);

  const auto est = predicted_resolution(coverage_region(s, target));
  const double mono_extent = 4.0 * pi * s.bandwidth_hz / speed_of_light;
  const auto g = ImageGrid::centered(target, 0.3, 5.0, 0.01, 0.05);
  const auto img = point_spread(s, target, g);
  const auto c = g.nearest(target);
  double lo = 1e300, hi = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    const double m = img.magnitude(c->first, iy);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  const double var_db = 20.0 * std::log10(hi / lo);
  line(est.dk_y <= tol::zero_dk * mono_extent && var_db < tol::flat_db, "8",
       f("opposite-side pair dk_y %.4f rad/m (monostatic %.2f); y-cut variation over +/-5 m %.3f dB (< 1 dB)",
         est.dk_y, mono_extent, var_db));
}

// ---- 9 -------------------------------------------------------------------

void oracle_criterion() {
  Scenario s;
  s.f0_hz = 28e9;
  s.bandwidth_hz = 500e6;
  s.noise_power = 0.05;
  s.seed = 42;
  s.terminals = {{1, {-0.6, 0.0}, {{-0.6, 0.0}, {-0.55, 0.01}}, {{-0.6, 0.0}, {-0.5, 0.0}}},
                 {2, {0.6, 0.0}, {{0.6, 0.0}}, {{0.6, 0.0}, {0.65, -0.02}}}};
  s.targets = {{{0.1, 19.9}, {1.0, 0.4}}, {{-0.3, 20.25}, {-0.3, 0.7}}};
  s.apply_defaults();
  s.pairing = AssociationMatrix(2);
  s.pairing.set(0, 1);
  const ImageGrid g{{-0.8, 19.2}, 0.05, 0.05, 32, 32};
  const auto recs = synthesize(s, acquisition_window(s, g), 4.0 * s.bandwidth_hz);

  const auto img = backproject(recs, s, g, {Interpolation::linear, 1});
  double worst = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double px = g.origin.x + ix * g.dx, py = g.origin.y + iy * g.dy;
      std::complex<double> acc = 0.0;
      for (const auto &r : recs) {
        const Vec2 t = s.terminals[r.channel.tx_terminal].tx_elements[r.channel.tx_element];
        const Vec2 q = s.terminals[r.channel.rx_terminal].rx_elements[r.channel.rx_element];
        const double tau = (std::hypot(px - t.x, py - t.y) + std::hypot(px - q.x, py - q.y)) / 3e8;
        const double u = (tau - r.t0) * r.fs;
        const auto k = static_cast<std::size_t>(u);
        const double a = u - static_cast<double>(k);
        acc += ((1.0 - a) * r.samples[k] + a * r.samples[k + 1]) *
               std::exp(std::complex<double>(0.0, 2.0 * std::acos(-1.0) * s.f0_hz * tau));
      }
      worst = std::max(worst, std::abs(img.at(ix, iy) - acc) / std::abs(acc));
    }
  bool same = true;
  for (unsigned w : {2u, 8u}) same = same && backproject(recs, s, g, {Interpolation::linear, w}).pixels == img.pixels;
  line(worst <= tol::oracle && same && recs.size() <= 8, "9",
       f("%zu channels, 32x32 grid: worst relative deviation from direct sum %.2e (limit 1e-9); workers 1/2/8 %s",
         recs.size(), worst, same ? "bit-identical" : "DIFFER"));
}

// ---- 10 ------------------------------------------------------------------

void monochromatic_criterion() {
  Scenario s;
  s.f0_hz = 28e9;
  s.bandwidth_hz = 1.0;
  s.terminals = {{1, {0, 0}, {{0, 0}}, {{0, 0}}}};
  s.apply_defaults();
  const auto region = coverage_region(s, target, 2);
  const auto est = predicted_resolution(region);
  const auto &pts = region.tiles.front().samples;
  const double spread = norm(pts.back() - pts.front());
  line(spread <= tol::point_extent && !est.rho_x && !est.rho_y, "10",
       f("B = 1 Hz: coverage spread %.2e rad/m (limit 1e-6); rho_x %s, rho_y %s", spread,
         est.rho_x ? "bounded" : "unbounded", est.rho_y ? "bounded" : "unbounded"));
}

} // namespace

int main() {
  timed("1-2", resolution_criteria);
  timed("3", area_criterion);
  timed("4", snr_criterion);
  timed("5", ladder_criterion);
  timed("6", tessellation_criterion);
  timed("7", bistatic_criterion);
  timed("8", opposite_side_criterion);
  timed("9", oracle_criterion);
  timed("10", monochromatic_criterion);
  std::printf("%s: %d failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures;
}
