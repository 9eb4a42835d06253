// netsense: batch front-end for coverage analysis, simulation, imaging,
// fusion, orchestration and reporting.
//
// Exit codes: 0 ok, 2 validation error, 3 runtime error. On failure a JSON
// error object is printed to stderr and written to <out>/error.json.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "netsense/netsense.hpp"

namespace fs = std::filesystem;
using namespace netsense;

namespace {

struct RunConfig {
  std::string scenario_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  double dyn_range_db = 40.0;
  unsigned workers = 0;
  std::string interp = "linear";
  double oversampling = default_oversampling;
  std::optional<double> grid_step;
  std::vector<double> grid_half;
  std::vector<double> grid_center;
  std::vector<double> target;
};

const std::vector<std::string> schema_keys = {"terminals",   "targets",       "f0_hz",   "bandwidth_hz",
                                              "noise_power", "sync_errors_s", "pairing", "seed"};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

template <typename Fn>
void write_with(const fs::path &p, Fn &&fn) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  fn(out);
}

Scenario load(const RunConfig &cfg) {
  if (cfg.scenario_path.empty()) throw ValidationError("--scenario is required");
  const std::string text = read_file(cfg.scenario_path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &) {
    return load_scenario(text); // reports the line
  }
  for (const auto &kv : cfg.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (std::find(schema_keys.begin(), schema_keys.end(), key) == schema_keys.end())
      throw ValidationError("--set: unknown scenario key '" + key + "'");
    json v;
    try {
      v = json::parse(value);
    } catch (const json::parse_error &) {
      v = value;
    }
    doc[key] = v;
  }
  if (cfg.seed) doc["seed"] = *cfg.seed;
  Scenario s = scenario_from_json(doc);
  require_valid(s);
  return s;
}

Vec2 target_of(const RunConfig &cfg, const Scenario &s) {
  if (cfg.target.size() == 2) return {cfg.target[0], cfg.target[1]};
  if (!s.targets.empty()) return s.targets.front().position;
  throw ValidationError("no target: pass --target x y or add one to the scenario");
}

ImageGrid grid_of(const RunConfig &cfg, const Scenario &s, std::optional<Vec2> fallback_center = std::nullopt) {
  if (!cfg.grid_step && cfg.grid_half.empty() && cfg.grid_center.empty()) {
    if (s.targets.empty() && fallback_center) {
      Scenario probe = probe_scenario(s, *fallback_center);
      return default_grid(probe);
    }
    return default_grid(s);
  }
  if (!cfg.grid_step || cfg.grid_half.size() != 2)
    throw ValidationError("custom grids need --grid-step and --grid-half hx hy");
  Vec2 c;
  if (cfg.grid_center.size() == 2) c = {cfg.grid_center[0], cfg.grid_center[1]};
  else if (!s.targets.empty()) c = s.targets.front().position;
  else if (fallback_center) c = *fallback_center;
  else throw ValidationError("--grid-center is required when the scenario has no target");
  return ImageGrid::centered(c, cfg.grid_half[0], cfg.grid_half[1], *cfg.grid_step, *cfg.grid_step);
}

BackprojectOptions bp_options(const RunConfig &cfg) {
  return {cfg.interp == "sinc" ? Interpolation::sinc : Interpolation::linear, cfg.workers};
}

fs::path out_dir(const RunConfig &cfg) {
  fs::path p = cfg.out_dir;
  fs::create_directories(p);
  return p;
}

std::vector<SignalRecord> simulate_records(const RunConfig &cfg, const Scenario &s, const ImageGrid &g) {
  return synthesize(s, acquisition_window(s, g), cfg.oversampling * s.bandwidth_hz);
}

void write_image(const fs::path &dir, const std::string &stem, const ComplexImage &img, double dyn) {
  write_with(dir / (stem + ".csv"), [&](std::ostream &o) { write_image_csv(o, img); });
  write_with(dir / (stem + ".pgm"), [&](std::ostream &o) { write_pgm(o, img, dyn); });
}

json metrics_json(const ComplexImage &img, const Scenario &s, std::optional<Vec2> truth) {
  const bool noisy = s.noise_power > 0.0;
  json j = to_json(analyze(img, noisy ? truth : std::nullopt));
  j["label"] = img.provenance.label;
  j["grid"] = to_json(img.grid);
  return j;
}

// ---- subcommands ---------------------------------------------------------

void run_coverage(const RunConfig &cfg, std::size_t n_freq, bool baseband) {
  const Scenario s = load(cfg);
  const Vec2 t = target_of(cfg, s);
  const auto region = coverage_region(s, t, n_freq, baseband);
  const auto est = predicted_resolution(region);
  const auto dir = out_dir(cfg);
  write_with(dir / "coverage.csv", [&](std::ostream &o) { write_coverage_csv(o, region); });
  write_with(dir / "hull.csv", [&](std::ostream &o) { write_hull_csv(o, est.hull); });
  json j = to_json(est);
  j["label"] = to_string(region.label);
  j["tiles"] = region.tiles.size();
  j["hull_area"] = num(polygon_area(est.hull));
  j["target"] = num(t);
  write_text(dir / "resolution.json", dump(j));
}

void run_simulate(const RunConfig &cfg) {
  const Scenario s = load(cfg);
  const auto g = grid_of(cfg, s);
  const auto w = acquisition_window(s, g);
  const auto recs = simulate_records(cfg, s, g);
  const auto dir = out_dir(cfg);
  write_with(dir / "records.csv", [&](std::ostream &o) { write_records_csv(o, recs); });
  write_text(dir / "simulate.json",
             dump({{"records", recs.size()},
                   {"t_min_s", num(w.t_min)},
                   {"t_max_s", num(w.t_max)},
                   {"fs_hz", num(cfg.oversampling * s.bandwidth_hz)},
                   {"samples_per_record", recs.empty() ? 0 : recs.front().samples.size()},
                   {"grid", to_json(g)}}));
}

void run_image(const RunConfig &cfg) {
  const Scenario s = load(cfg);
  const auto g = grid_of(cfg, s);
  const auto recs = simulate_records(cfg, s, g);
  const auto imgs = image_pairs(recs, s, g, bp_options(cfg));
  const auto dir = out_dir(cfg);
  json list = json::array();
  for (const auto &img : imgs) {
    const std::string stem = "image_" + to_string(*img.provenance.pair);
    write_image(dir, stem, img, cfg.dyn_range_db);
    list.push_back(stem + ".csv");
  }
  write_text(dir / "images.json", dump({{"grid", to_json(g)}, {"images", list}}));
}

ComplexImage fuse_images(const std::vector<ComplexImage> &imgs, const Scenario &s, const std::string &mode,
                         const std::string &weights) {
  const auto w = weights == "equalized" ? FusionWeights::equalized(s, imgs) : FusionWeights::uniform(imgs);
  return mode == "incoherent" ? fuse_incoherent(imgs, w) : fuse_coherent(imgs, w);
}

void run_fuse(const RunConfig &cfg, const std::string &mode, const std::string &weights,
              const std::vector<std::string> &inputs) {
  const Scenario s = load(cfg);
  std::vector<ComplexImage> imgs;
  if (inputs.empty()) {
    const auto g = grid_of(cfg, s);
    imgs = image_pairs(simulate_records(cfg, s, g), s, g, bp_options(cfg));
  } else {
    static const std::regex name(R"(image_(\d+)-(\d+)\.csv)");
    for (const auto &path : inputs) {
      std::smatch m;
      const std::string file = fs::path(path).filename().string();
      if (!std::regex_match(file, m, name))
        throw ValidationError("image file '" + path + "' must be named image_<tx>-<rx>.csv");
      std::ifstream in(path);
      if (!in) throw ValidationError("cannot read file '" + path + "'");
      imgs.push_back(read_image_csv(in, Provenance::of_pair({std::stoul(m[1]), std::stoul(m[2])})));
    }
  }
  imgs = select_pairs(s.pairing, imgs);
  if (imgs.empty()) throw ValidationError("no image of an active pair to fuse");
  const auto fused = fuse_images(imgs, s, mode, weights);
  const auto dir = out_dir(cfg);
  const std::string stem = mode == "incoherent" ? "fused_inc" : "fused_coh";
  write_image(dir, stem, fused, cfg.dyn_range_db);
  std::optional<Vec2> truth;
  if (!s.targets.empty()) truth = s.targets.front().position;
  json j = metrics_json(fused, s, truth);
  j["mode"] = mode;
  j["weights"] = weights;
  j["images"] = imgs.size();
  write_text(dir / "metrics.json", dump(j));
}

void run_orchestrate(const RunConfig &cfg, std::size_t L, std::optional<double> B, double psi0_deg,
                     const std::string &pairing, bool greedy, const std::string &objective) {
  Scenario s = load(cfg);
  if (B) {
    s.bandwidth_hz = *B;
    require_valid(s);
  }
  const Vec2 t = target_of(cfg, s);
  const PairingMode mode = pairing == "full" ? PairingMode::full : PairingMode::identity;
  OrchestrationPlan p;
  if (greedy) {
    const Objective o = objective == "extent_x" ? Objective::extent_x
                        : objective == "extent_sum" ? Objective::extent_sum
                                                    : Objective::extent_y;
    p = plan(s, t, L, o, mode);
  } else {
    TessellationConfig tc;
    tc.psi0 = deg2rad(psi0_deg);
    tc.count = L;
    tc.pairing = mode;
    p = tessellated_plan(s, t, tc);
  }
  p.scenario.targets = s.targets.empty() ? std::vector<PointTarget>{{t, {1, 0}}} : s.targets;

  const auto g = grid_of(cfg, p.scenario, t);
  const auto imgs = image_pairs(simulate_records(cfg, p.scenario, g), p.scenario, g, bp_options(cfg));
  const auto fused = fuse_coherent(imgs, FusionWeights::uniform(imgs));

  const auto dir = out_dir(cfg);
  json j = to_json(p);
  j["mode"] = greedy ? "greedy" : "tessellation";
  j["bandwidth_hz"] = num(p.scenario.bandwidth_hz);
  write_text(dir / "plan.json", dump(j));
  write_text(dir / "plan_scenario.json", dump(to_json(p.scenario)));
  write_image(dir, "fused_coh", fused, cfg.dyn_range_db);
  write_text(dir / "metrics.json", dump(metrics_json(fused, p.scenario, t)));
}

void run_report(const RunConfig &cfg, const std::string &in_dir) {
  if (in_dir.empty()) throw ValidationError("--in is required");
  if (!fs::is_directory(in_dir)) throw ValidationError("'" + in_dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto &e : fs::recursive_directory_iterator(in_dir))
    if (e.is_regular_file() && e.path().filename() == "metrics.json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json runs = json::array();
  std::ostringstream csv;
  write_metrics_csv_header(csv);
  auto opt = [](const json &v) { return v.is_null() ? std::string() : format9(v.get<double>()); };
  for (const auto &f : files) {
    json m;
    try {
      m = json::parse(read_file(f.string()));
    } catch (const json::parse_error &e) {
      throw ValidationError("malformed metrics file '" + f.string() + "': " + e.what());
    }
    const std::string run = fs::relative(f.parent_path(), in_dir).generic_string();
    runs.push_back({{"run", run}, {"metrics", m}});
    const auto &pk = m.at("peak_pos");
    const auto &pv = m.at("peak_val");
    csv << run << ',' << opt(pk[0]) << ',' << opt(pk[1]) << ','
        << format9(std::hypot(pv[0].get<double>(), pv[1].get<double>())) << ',' << opt(m.at("rho_x_meas_m")) << ','
        << opt(m.at("rho_y_meas_m")) << ',' << opt(m.at("pslr_db")) << ',' << opt(m.at("islr_db")) << ','
        << opt(m.at("peak_snr_db")) << '\n';
  }
  const auto dir = out_dir(cfg);
  write_text(dir / "summary.json", dump({{"runs", runs}, {"count", files.size()}}));
  write_text(dir / "summary.csv", csv.str());
}

int fail(const RunConfig &cfg, int code, const std::string &kind, const std::string &msg, json extra = json::object()) {
  json err = {{"error", kind}, {"message", msg}, {"exit_code", code}};
  err.update(extra);
  std::cerr << err.dump() << '\n';
  try {
    if (!cfg.out_dir.empty()) {
      fs::create_directories(cfg.out_dir);
      write_text(fs::path(cfg.out_dir) / "error.json", dump(err));
    }
  } catch (...) {
  }
  return code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"netsense: networked radio sensing simulator and analysis toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  const char *env_out = std::getenv("NETSENSE_OUT_DIR");
  cfg.out_dir = env_out && *env_out ? env_out : "netsense_out";

  auto common = [&](CLI::App *sub, bool needs_scenario = true) {
    auto *o = sub->add_option("--scenario", cfg.scenario_path, "Scenario JSON file");
    if (needs_scenario) o->required();
    sub->add_option("--out", cfg.out_dir, "Output directory (default: $NETSENSE_OUT_DIR or ./netsense_out)");
    sub->add_option("--set", cfg.overrides, "Override a top-level scenario key: key=value (JSON value)");
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t &v) { cfg.seed = v; }, "Noise seed");
    sub->add_option("--dyn-range", cfg.dyn_range_db, "PGM dynamic range in dB")->check(CLI::PositiveNumber);
    sub->add_option("--workers", cfg.workers, "Back-projection threads (0: all cores)");
    sub->add_option("--interp", cfg.interp, "Interpolation")->check(CLI::IsMember({"linear", "sinc"}));
    sub->add_option("--oversampling", cfg.oversampling, "Sampling rate / bandwidth")->check(CLI::Range(1.0, 1e3));
    sub->add_option_function<double>("--grid-step", [&](const double &v) { cfg.grid_step = v; }, "Pixel spacing (m)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--grid-half", cfg.grid_half, "Grid half extents hx hy (m)")->expected(2);
    sub->add_option("--grid-center", cfg.grid_center, "Grid centre x y (m)")->expected(2);
    sub->add_option("--target", cfg.target, "Analysis point x y (m); default: first target")->expected(2);
  };

  auto *coverage = app.add_subcommand("coverage", "Wavenumber coverage, hull and predicted resolution");
  common(coverage);
  std::size_t n_freq = default_frequency_samples;
  bool baseband = false;
  coverage->add_option("--n-freq", n_freq, "Frequency samples per tile")->check(CLI::Range(2, 100000));
  coverage->add_flag("--baseband", baseband, "Shift tiles to base-band");

  auto *simulate = app.add_subcommand("simulate", "Synthesize channel records");
  common(simulate);

  auto *image = app.add_subcommand("image", "Back-project one image per active pair");
  common(image);

  auto *fuse = app.add_subcommand("fuse", "Fuse per-pair images");
  common(fuse);
  std::string mode = "coherent", weights = "uniform";
  std::vector<std::string> inputs;
  fuse->add_option("--mode", mode, "Fusion mode")->check(CLI::IsMember({"incoherent", "coherent"}));
  fuse->add_option("--weights", weights, "Weights")->check(CLI::IsMember({"uniform", "equalized"}));
  fuse->add_option("--images", inputs, "Image CSVs named image_<tx>-<rx>.csv (default: simulate)");

  auto *orchestrate = app.add_subcommand("orchestrate", "Plan an acquisition and image it");
  common(orchestrate);
  std::size_t L = 4;
  std::optional<double> B;
  double psi0_deg = 90.0;
  std::string pairing = "identity", objective = "extent_y";
  bool greedy = false;
  orchestrate->add_option("--L", L, "Number of terminals in the plan")->check(CLI::Range(1, 1000));
  orchestrate->add_option_function<double>("--B", [&](const double &v) { B = v; }, "Bandwidth override (Hz)")
      ->check(CLI::PositiveNumber);
  orchestrate->add_option("--psi0-deg", psi0_deg, "First observation angle (deg)");
  orchestrate->add_option("--pairing", pairing, "Pairing among planned terminals")
      ->check(CLI::IsMember({"identity", "full"}));
  orchestrate->add_flag("--greedy", greedy, "Greedy subset of the scenario's terminals instead of tessellation");
  orchestrate->add_option("--objective", objective, "Greedy objective")
      ->check(CLI::IsMember({"extent_y", "extent_x", "extent_sum"}));

  auto *report = app.add_subcommand("report", "Aggregate metrics.json files of a run directory");
  common(report, false);
  std::string in_dir;
  report->add_option("--in", in_dir, "Directory of runs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return fail(cfg, 2, "usage", e.what());
  }

  try {
    if (*coverage) run_coverage(cfg, n_freq, baseband);
    else if (*simulate) run_simulate(cfg);
    else if (*image) run_image(cfg);
    else if (*fuse) run_fuse(cfg, mode, weights, inputs);
    else if (*orchestrate) run_orchestrate(cfg, L, B, psi0_deg, pairing, greedy, objective);
    else if (*report) run_report(cfg, in_dir);
  } catch (const ParseError &e) {
    return fail(cfg, 2, "parse", e.what(), {{"field", e.field()}, {"line", e.line()}});
  } catch (const ValidationError &e) {
    return fail(cfg, 2, "validation", e.what());
  } catch (const std::exception &e) {
    return fail(cfg, 3, "runtime", e.what());
  }
  return 0;
}
