#pragma once

// JSON scenario ingestion and serialization.
//
// Schema (SI units):
//   {
//     "terminals": [ { "id": 1, "phase_center": [x, y],
//                      "tx_elements": [[x, y], ...], "rx_elements": [[x, y], ...],
//                      "tx_ula": {...}, "rx_ula": {...} } ],
//     "targets":   [ { "position": [x, y], "reflectivity": 1.0 | [re, im] } ],
//     "f0_hz": 28e9, "bandwidth_hz": 500e6,
//     "noise_power": 0.0,                      // optional, default 0
//     "sync_errors_s": [[...], ...],           // optional, default zeros
//     "pairing": [[1, 0], [0, 1]] | "identity" | "full",   // optional, default identity
//     "seed": 0                                // optional, default 0
//   }
//
// An `*_ula` block appends a uniform linear array centred on the phase centre:
//   { "count": 134, "spacing": 0.0053571 | "spacing_wavelengths": 0.5, "direction": [1, 0] }
// (`direction` defaults to [1, 0]; `spacing_wavelengths` is relative to c/f0).

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "netsense/error.hpp"
#include "netsense/scene.hpp"

namespace netsense {

using json = nlohmann::json;

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline double number(const json &j, const std::string &path) {
  if (!j.is_number()) throw ParseError("field '" + path + "' must be a number", path);
  return j.get<double>();
}

inline const json &member(const json &obj, const char *key, const std::string &path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing required field '" + path + key + "'", path + key);
  return *it;
}

inline Vec2 vec2(const json &j, const std::string &path) {
  if (!j.is_array() || j.size() != 2) throw ParseError("field '" + path + "' must be an [x, y] pair", path);
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

inline std::vector<Vec2> vec2_list(const json &j, const std::string &path) {
  if (!j.is_array()) throw ParseError("field '" + path + "' must be an array of [x, y] pairs", path);
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec2(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline void append_ula(const json &j, const std::string &path, Vec2 center, double f0, std::vector<Vec2> &out) {
  if (!j.is_object()) throw ParseError("field '" + path + "' must be an object", path);
  const json &count_j = member(j, "count", path + ".");
  if (!count_j.is_number_integer() || count_j.get<long long>() < 1)
    throw ParseError("field '" + path + ".count' must be a positive integer", path + ".count");
  const auto count = count_j.get<std::size_t>();

  double spacing = 0.0;
  if (j.contains("spacing")) {
    spacing = number(j["spacing"], path + ".spacing");
  } else if (j.contains("spacing_wavelengths")) {
    if (!(f0 > 0.0)) throw ParseError("'" + path + ".spacing_wavelengths' needs a positive f0_hz", path);
    spacing = number(j["spacing_wavelengths"], path + ".spacing_wavelengths") * wavelength(f0);
  } else if (count > 1) {
    throw ParseError("missing required field '" + path + ".spacing'", path + ".spacing");
  }

  Vec2 dir{1.0, 0.0};
  if (j.contains("direction")) dir = vec2(j["direction"], path + ".direction");
  const double len = norm(dir);
  if (!(len > 0.0)) throw ParseError("field '" + path + ".direction' must be nonzero", path + ".direction");
  dir = (1.0 / len) * dir;

  const double mid = 0.5 * static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(center + ((static_cast<double>(i) - mid) * spacing) * dir);
}

template <typename T, typename Conv>
SquareMatrix<T> square(const json &j, std::size_t n, const std::string &path, Conv conv) {
  if (!j.is_array() || j.size() != n)
    throw ParseError("field '" + path + "' must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix",
                     path);
  SquareMatrix<T> m(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string row = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != n)
      throw ParseError("field '" + row + "' must have " + std::to_string(n) + " entries", row);
    for (std::size_t c = 0; c < n; ++c) m(r, c) = conv(j[r][c], row + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline cplx complex_value(const json &j, const std::string &path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  throw ParseError("field '" + path + "' must be a number or [re, im]", path);
}

} // namespace detail

/// Builds a Scenario from a parsed document, filling documented defaults.
inline Scenario scenario_from_json(const json &doc) {
  using namespace detail;
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object", "");

  Scenario s;
  s.f0_hz = number(member(doc, "f0_hz", ""), "f0_hz");
  s.bandwidth_hz = number(member(doc, "bandwidth_hz", ""), "bandwidth_hz");

  const json &terms = member(doc, "terminals", "");
  if (!terms.is_array()) throw ParseError("field 'terminals' must be an array", "terminals");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = "terminals[" + std::to_string(i) + "]";
    const json &t = terms[i];
    if (!t.is_object()) throw ParseError("field '" + path + "' must be an object", path);
    Terminal term;
    const json &id = member(t, "id", path + ".");
    if (!id.is_number_integer()) throw ParseError("field '" + path + ".id' must be an integer", path + ".id");
    term.id = id.get<int>();
    term.phase_center = vec2(member(t, "phase_center", path + "."), path + ".phase_center");
    if (t.contains("tx_elements")) term.tx_elements = vec2_list(t["tx_elements"], path + ".tx_elements");
    if (t.contains("rx_elements")) term.rx_elements = vec2_list(t["rx_elements"], path + ".rx_elements");
    if (t.contains("tx_ula")) append_ula(t["tx_ula"], path + ".tx_ula", term.phase_center, s.f0_hz, term.tx_elements);
    if (t.contains("rx_ula")) append_ula(t["rx_ula"], path + ".rx_ula", term.phase_center, s.f0_hz, term.rx_elements);
    s.terminals.push_back(std::move(term));
  }

  if (doc.contains("targets")) {
    const json &tg = doc["targets"];
    if (!tg.is_array()) throw ParseError("field 'targets' must be an array", "targets");
    for (std::size_t i = 0; i < tg.size(); ++i) {
      const std::string path = "targets[" + std::to_string(i) + "]";
      if (!tg[i].is_object()) throw ParseError("field '" + path + "' must be an object", path);
      PointTarget pt;
      pt.position = vec2(member(tg[i], "position", path + "."), path + ".position");
      if (tg[i].contains("reflectivity")) pt.reflectivity = complex_value(tg[i]["reflectivity"], path + ".reflectivity");
      s.targets.push_back(pt);
    }
  }

  if (doc.contains("noise_power")) s.noise_power = number(doc["noise_power"], "noise_power");

  if (doc.contains("seed")) {
    const json &seed = doc["seed"];
    if (!seed.is_number_integer() || seed.get<long long>() < 0)
      throw ParseError("field 'seed' must be a non-negative integer", "seed");
    s.seed = seed.get<std::uint64_t>();
  }

  const std::size_t L = s.terminals.size();
  if (doc.contains("sync_errors_s"))
    s.sync_errors = square<double>(doc["sync_errors_s"], L, "sync_errors_s",
                                   [](const json &v, const std::string &p) { return number(v, p); });

  if (doc.contains("pairing")) {
    const json &p = doc["pairing"];
    if (p.is_string()) {
      const auto name = p.get<std::string>();
      if (name == "identity") s.pairing = AssociationMatrix::identity(L);
      else if (name == "full") s.pairing = AssociationMatrix::full(L);
      else throw ParseError("field 'pairing' must be a matrix, \"identity\" or \"full\"", "pairing");
    } else {
      const auto cells = square<int>(p, L, "pairing", [](const json &v, const std::string &path) {
        if (!v.is_number_integer() || (v.get<long long>() != 0 && v.get<long long>() != 1))
          throw ParseError("field '" + path + "' must be 0 or 1", path);
        return v.get<int>();
      });
      s.pairing = AssociationMatrix(L);
      for (std::size_t r = 0; r < L; ++r)
        for (std::size_t c = 0; c < L; ++c) s.pairing.set(r, c, cells(r, c) == 1);
    }
  }

  s.apply_defaults();
  return s;
}

/// Parses JSON text; syntax errors report the line, schema errors name the field.
inline Scenario load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    const std::size_t line = detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("JSON syntax error at line " + std::to_string(line) + ": " + e.what(), "", line);
  }
  return scenario_from_json(doc);
}

/// Serializes with explicit element lists; `load_scenario(to_json(s).dump())` reproduces `s`.
inline json to_json(const Scenario &s) {
  auto pt = [](Vec2 v) { return json::array({v.x, v.y}); };
  json doc;
  doc["f0_hz"] = s.f0_hz;
  doc["bandwidth_hz"] = s.bandwidth_hz;
  doc["noise_power"] = s.noise_power;
  doc["seed"] = s.seed;

  json terms = json::array();
  for (const auto &t : s.terminals) {
    json jt;
    jt["id"] = t.id;
    jt["phase_center"] = pt(t.phase_center);
    jt["tx_elements"] = json::array();
    for (auto e : t.tx_elements) jt["tx_elements"].push_back(pt(e));
    jt["rx_elements"] = json::array();
    for (auto e : t.rx_elements) jt["rx_elements"].push_back(pt(e));
    terms.push_back(std::move(jt));
  }
  doc["terminals"] = std::move(terms);

  json targets = json::array();
  for (const auto &t : s.targets)
    targets.push_back({{"position", pt(t.position)}, {"reflectivity", {t.reflectivity.real(), t.reflectivity.imag()}}});
  doc["targets"] = std::move(targets);

  const std::size_t L = s.size();
  json sync = json::array();
  json pairing = json::array();
  for (std::size_t r = 0; r < L; ++r) {
    json srow = json::array();
    json prow = json::array();
    for (std::size_t c = 0; c < L; ++c) {
      srow.push_back(s.sync_errors.size() == L ? s.sync_errors(r, c) : 0.0);
      prow.push_back(s.pairing.size() == L && s.pairing(r, c) ? 1 : 0);
    }
    sync.push_back(std::move(srow));
    pairing.push_back(std::move(prow));
  }
  doc["sync_errors_s"] = std::move(sync);
  doc["pairing"] = std::move(pairing);
  return doc;
}

} // namespace netsense
