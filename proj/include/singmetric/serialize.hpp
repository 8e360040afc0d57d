#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "singmetric/atomic.hpp"
#include "singmetric/errors.hpp"
#include "singmetric/grid.hpp"
#include "singmetric/mass.hpp"
#include "singmetric/toric.hpp"

namespace singmetric::io {

using nlohmann::json;

inline json rat_json(const Rat& r) { return rat_to_string(r); }

inline Rat rat_parse(const json& j) {
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) return rat_from_string(std::to_string(j.get<double>()));
  throw ParseError("expected a rational");
}

// ---- mass vectors ----

inline json to_json(const MassVector& mv) {
  json j;
  j["engine"] = "exact";
  j["n"] = mv.n;
  json m = json::array();
  for (const Rat& x : mv.m) m.push_back(rat_json(x));
  j["masses"] = m;
  j["budget"] = rat_json(mv.budget);
  j["tolerance"] = 0.0;
  return j;
}

inline json to_json(const MassVectorD& mv, const std::string& engine = "grid") {
  json j;
  j["engine"] = engine;
  j["n"] = mv.n;
  j["masses"] = mv.m;
  j["budget"] = mv.budget;
  j["tolerance"] = mv.tolerance;
  return j;
}

// ---- toric payload: {"ambient": [[x,y],...], "body": [[x,y],...]} ----

inline json polygon_json(const toric::RationalPolygon& p) {
  json arr = json::array();
  for (const auto& v : p.v) arr.push_back(json::array({rat_json(v.x), rat_json(v.y)}));
  return arr;
}

inline toric::RationalPolygon polygon_parse(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw ParseError("polygon must be a nonempty array");
  std::vector<toric::Vec2> pts;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2) throw ParseError("polygon vertex must be [x, y]");
    pts.push_back({rat_parse(e[0]), rat_parse(e[1])});
  }
  return toric::RationalPolygon(std::move(pts));
}

inline json to_json(const toric::ToricClass& t) {
  json j;
  j["ambient"] = polygon_json(t.ambient);
  j["body"] = polygon_json(t.body);
  return j;
}

inline toric::ToricClass toric_parse(const json& j) {
  if (!j.contains("ambient") || !j.contains("body"))
    throw ParseError("toric payload needs \"ambient\" and \"body\"");
  return toric::ToricClass(polygon_parse(j.at("ambient")), polygon_parse(j.at("body")));
}

// ---- atomic payload: {"budget": "p/q", "points": [...], "lelong": [...]} ----

inline json to_json(const atomic::AtomicSingularity& a) {
  json j;
  j["budget"] = rat_json(a.budget);
  j["points"] = a.points;
  json nu = json::array();
  for (const Rat& v : a.lelong) nu.push_back(rat_json(v));
  j["lelong"] = nu;
  return j;
}

inline atomic::AtomicSingularity atomic_parse(const json& j) {
  if (!j.contains("budget") || !j.contains("points") || !j.contains("lelong"))
    throw ParseError("atomic payload needs \"budget\", \"points\", \"lelong\"");
  std::vector<std::string> pts = j.at("points").get<std::vector<std::string>>();
  std::vector<Rat> nu;
  for (const auto& e : j.at("lelong")) nu.push_back(rat_parse(e));
  return atomic::AtomicSingularity(rat_parse(j.at("budget")), std::move(pts), std::move(nu));
}

// ---- grid payload: values file (CSV or flat binary) + JSON sidecar ----

inline json sidecar_json(const grid::GridPotential& u) {
  json j;
  j["N"] = u.N;
  j["c"] = u.background;
  json atoms = json::array();
  for (const grid::Atom& a : u.atoms)
    atoms.push_back(json::array({a.i, a.j, std::to_string(a.nu)}));
  j["atoms"] = atoms;
  return j;
}

inline void sidecar_parse(const json& j, grid::GridPotential& u) {
  if (!j.contains("N") || !j.contains("c")) throw ParseError("grid sidecar needs \"N\" and \"c\"");
  u.N = j.at("N").get<int>();
  u.background = j.at("c").get<double>();
  if (u.N <= 0 || u.background <= 0) throw ParseError("grid sidecar values must be positive");
  u.atoms.clear();
  if (j.contains("atoms"))
    for (const auto& e : j.at("atoms")) {
      if (!e.is_array() || e.size() != 3) throw ParseError("atom entry must be [i, j, nu]");
      grid::Atom a;
      a.i = e[0].get<int>();
      a.j = e[1].get<int>();
      a.nu = e[2].is_string() ? std::stod(e[2].get<std::string>()) : e[2].get<double>();
      if (a.i < 0 || a.i >= u.N || a.j < 0 || a.j >= u.N || a.nu < 0)
        throw ParseError("atom entry out of range");
      u.atoms.push_back(a);
    }
}

inline void write_values_csv(const std::string& path, int N, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out.precision(17);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (j) out << ',';
      out << values[static_cast<size_t>(i) * N + j];
    }
    out << '\n';
  }
}

inline void write_values_binary(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
}

inline std::vector<double> read_values_csv(const std::string& path, int N) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<double> values;
  values.reserve(static_cast<size_t>(N) * N);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
  }
  if (values.size() != static_cast<size_t>(N) * N)
    throw ParseError("value count does not match N*N in " + path);
  return values;
}

inline std::vector<double> read_values_binary(const std::string& path, int N) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<double> values(static_cast<size_t>(N) * N);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double)))
    throw ParseError("short read in " + path);
  return values;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Write a grid potential as values + sidecar; `path` names the values
/// file (.csv or anything else = flat binary), sidecar is path + ".json".
inline void write_grid(const std::string& path, const grid::GridPotential& u) {
  if (ends_with(path, ".csv"))
    write_values_csv(path, u.N, u.values);
  else
    write_values_binary(path, u.values);
  std::ofstream side(path + ".json");
  if (!side) throw ParseError("cannot open " + path + ".json for writing");
  side << sidecar_json(u).dump(2) << '\n';
}

inline grid::GridPotential read_grid(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw ParseError("missing sidecar " + path + ".json");
  json j;
  try {
    side >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad sidecar: ") + e.what());
  }
  grid::GridPotential u;
  sidecar_parse(j, u);
  u.values = ends_with(path, ".csv") ? read_values_csv(path, u.N)
                                     : read_values_binary(path, u.N);
  return u;
}

// ---- handles ----

/// A parsed instance of one of the engines, as the CLI sees it. The exact
/// payloads carry their cached mass on first computation.
struct Handle {
  std::variant<toric::ToricClass, atomic::AtomicSingularity, grid::GridPotential> payload;

  std::string engine() const {
    switch (payload.index()) {
      case 0: return "toric";
      case 1: return "atomic";
      default: return "grid";
    }
  }
};

/// Parse a handle from inline JSON text or a file path. Grid inputs are
/// given by the values-file path (sidecar found next to it).
inline Handle parse_handle(const std::string& input) {
  std::string text = input;
  if (!input.empty() && input[0] != '{' && input[0] != '[') {
    // a path: grid values file, or a JSON document for the exact engines
    std::ifstream probe(input + ".json");
    if (probe.good()) return {read_grid(input)};
    std::ifstream in(input);
    if (!in) throw ParseError("cannot open " + input);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  if (j.contains("ambient")) return {toric_parse(j)};
  if (j.contains("lelong")) return {atomic_parse(j)};
  throw ParseError("unrecognized payload: expected a toric or atomic document");
}

inline json to_json(const Handle& h) {
  if (const auto* t = std::get_if<toric::ToricClass>(&h.payload)) return to_json(*t);
  if (const auto* a = std::get_if<atomic::AtomicSingularity>(&h.payload)) return to_json(*a);
  return sidecar_json(std::get<grid::GridPotential>(h.payload));
}

}  // namespace singmetric::io
