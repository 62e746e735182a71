#include "slabprobe/run/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "slabprobe/error.hpp"

namespace slabprobe::run {

using nlohmann::json;

namespace {

class Reader {
 public:
  std::vector<std::string> issues;

  void keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
    if (!obj.is_object()) {
      issues.push_back(fmt::format("{}: expected an object", path));
      return;
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) issues.push_back(fmt::format("{}: unknown key '{}'", path, it.key()));
    }
  }

  double number(const json& obj, const char* key, double fallback, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      issues.push_back(fmt::format("{}.{}: expected a number", path, key));
      return fallback;
    }
    return v.get<double>();
  }

  int integer(const json& obj, const char* key, int fallback, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      issues.push_back(fmt::format("{}.{}: expected an integer", path, key));
      return fallback;
    }
    return v.get<int>();
  }

  bool boolean(const json& obj, const char* key, bool fallback, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      issues.push_back(fmt::format("{}.{}: expected true or false", path, key));
      return fallback;
    }
    return v.get<bool>();
  }

  std::string string(const json& obj, const char* key, const std::string& fallback, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      issues.push_back(fmt::format("{}.{}: expected a string", path, key));
      return fallback;
    }
    return v.get<std::string>();
  }

  Vec2 point(const json& v, const std::string& path, Vec2 fallback = Vec2::Zero()) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      issues.push_back(fmt::format("{}: expected [x, y]", path));
      return fallback;
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  Vec2 point(const json& obj, const char* key, Vec2 fallback, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return point(obj.at(key), path + "." + key, fallback);
  }

  std::vector<double> numbers(const json& obj, const char* key, std::vector<double> fallback, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    std::vector<double> out;
    if (!v.is_array()) {
      issues.push_back(fmt::format("{}.{}: expected a list of numbers", path, key));
      return fallback;
    }
    for (const auto& x : v) {
      if (!x.is_number()) {
        issues.push_back(fmt::format("{}.{}: expected a list of numbers", path, key));
        return fallback;
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  // Runs a validator and folds its issues into ours.
  void collect(const std::string& prefix, const std::function<void()>& check) {
    try {
      check();
    } catch (const ValidationError& e) {
      for (const auto& issue : e.issues()) issues.push_back(prefix.empty() ? issue : prefix + ": " + issue);
    } catch (const Error& e) {
      issues.push_back(prefix.empty() ? std::string(e.what()) : prefix + ": " + e.what());
    }
  }
};

json to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

std::optional<geometry::CavityShape> parse_cavity(Reader& r, const json& c) {
  if (c.is_null()) return std::nullopt;
  const std::string type = r.string(c, "type", "", "cavity");
  if (type == "disc") {
    r.keys(c, "cavity", {"type", "center", "radius"});
    return geometry::Disc{r.point(c, "center", {0.0, 0.5}, "cavity"), r.number(c, "radius", 0.2, "cavity")};
  }
  if (type == "ellipse") {
    r.keys(c, "cavity", {"type", "center", "semi_axes", "rotation"});
    geometry::Ellipse e;
    e.center = r.point(c, "center", e.center, "cavity");
    const Vec2 ab = r.point(c, "semi_axes", {e.semi_a, e.semi_b}, "cavity");
    e.semi_a = ab.x();
    e.semi_b = ab.y();
    e.rotation = r.number(c, "rotation", 0.0, "cavity");
    return e;
  }
  if (type == "polygon") {
    r.keys(c, "cavity", {"type", "vertices"});
    geometry::Polygon poly;
    if (!c.contains("vertices") || !c["vertices"].is_array()) {
      r.issues.push_back("cavity.vertices: expected a list of [x, y]");
    } else {
      for (std::size_t i = 0; i < c["vertices"].size(); ++i) {
        poly.vertices.push_back(r.point(c["vertices"][i], fmt::format("cavity.vertices[{}]", i)));
      }
    }
    return poly;
  }
  if (type == "star") {
    r.keys(c, "cavity", {"type", "center", "cos", "sin"});
    geometry::RadialStar s;
    s.center = r.point(c, "center", s.center, "cavity");
    s.cos_coeffs = r.numbers(c, "cos", s.cos_coeffs, "cavity");
    s.sin_coeffs = r.numbers(c, "sin", {}, "cavity");
    return s;
  }
  r.issues.push_back(fmt::format("cavity.type: expected disc, ellipse, polygon or star, got '{}'", type));
  return std::nullopt;
}

json cavity_json(const std::optional<geometry::CavityShape>& cavity) {
  if (!cavity) return nullptr;
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, geometry::Disc>) {
          return {{"type", "disc"}, {"center", to_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, geometry::Ellipse>) {
          return {{"type", "ellipse"},
                  {"center", to_json(s.center)},
                  {"semi_axes", json::array({s.semi_a, s.semi_b})},
                  {"rotation", s.rotation}};
        } else if constexpr (std::is_same_v<T, geometry::Polygon>) {
          json v = json::array();
          for (const auto& p : s.vertices) v.push_back(to_json(p));
          return {{"type", "polygon"}, {"vertices", v}};
        } else {
          return {{"type", "star"}, {"center", to_json(s.center)}, {"cos", s.cos_coeffs}, {"sin", s.sin_coeffs}};
        }
      },
      *cavity);
}

}  // namespace

indicator::SceneSpec RunConfig::scene_spec() const {
  indicator::SceneSpec spec;
  spec.slab = slab;
  spec.cavity = cavity;
  spec.gamma = gamma;
  spec.mesh = mesh;
  spec.cavity_segments = cavity_segments;
  return spec;
}

double auto_halfwidth(const RunConfig& config) {
  const double t = config.sweep.t_hi;
  const double delta = config.sweep.indicator.delta_ratio * t;
  double px = 0.0;
  for (const auto& p : config.probes.probes) px = std::max(px, std::abs(p.p.x()));
  return px + t + delta + 2.0 * config.slab.thickness();
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  Reader r;
  RunConfig cfg;
  r.keys(root, "config", {"run_id", "geometry", "gamma", "cavity", "probes", "h_grid", "cutoff", "sweep", "mesh",
                          "thresholds", "data", "output", "workers", "seed"});
  cfg.run_id = r.string(root, "run_id", cfg.run_id, "config");

  const json geo = root.value("geometry", json::object());
  r.keys(geo, "geometry", {"d1", "d2", "halfwidth"});
  cfg.slab.d1 = r.number(geo, "d1", 0.0, "geometry");
  cfg.slab.d2 = r.number(geo, "d2", 1.0, "geometry");
  if (geo.contains("halfwidth") && !(geo["halfwidth"].is_string() && geo["halfwidth"] == "auto")) {
    cfg.halfwidth_auto = false;
    cfg.slab.halfwidth = r.number(geo, "halfwidth", 1.0, "geometry");
  }

  const json gam = root.value("gamma", json::object());
  r.keys(gam, "gamma", {"R", "background", "bumps"});
  {
    std::vector<probe::GammaBump> bumps;
    if (gam.contains("bumps")) {
      if (!gam["bumps"].is_array()) r.issues.push_back("gamma.bumps: expected a list");
      for (std::size_t i = 0; gam["bumps"].is_array() && i < gam["bumps"].size(); ++i) {
        const json& b = gam["bumps"][i];
        const std::string path = fmt::format("gamma.bumps[{}]", i);
        r.keys(b, path, {"center", "radius", "amplitude"});
        bumps.push_back({r.point(b, "center", {0.0, 0.5}, path), r.number(b, "radius", 0.1, path),
                         r.number(b, "amplitude", 0.0, path)});
      }
    }
    cfg.gamma = probe::GammaField(std::move(bumps), r.number(gam, "R", 0.0, "gamma"),
                                  r.number(gam, "background", 1.0, "gamma"));
  }

  if (root.contains("cavity")) cfg.cavity = parse_cavity(r, root["cavity"]);

  const json pr = root.value("probes", json::object());
  r.keys(pr, "probes", {"points", "line", "axis"});
  const Vec2 axis = r.point(pr, "axis", {1.0, 0.0}, "probes");
  if (pr.contains("points") && pr.contains("line")) r.issues.push_back("probes: give either points or line, not both");
  if (pr.contains("line")) {
    const json& l = pr["line"];
    r.keys(l, "probes.line", {"start", "end", "count"});
    reconstruct::ProbeLine line;
    line.start = r.point(l, "start", line.start, "probes.line");
    line.end = r.point(l, "end", line.end, "probes.line");
    line.count = r.integer(l, "count", line.count, "probes.line");
    line.axis = axis;
    if (line.count >= 1) cfg.probes = reconstruct::make_probe_line(line);
    else r.issues.push_back("probes.line.count: must be at least 1");
  } else if (pr.contains("points")) {
    if (!pr["points"].is_array()) r.issues.push_back("probes.points: expected a list of [x, y]");
    for (std::size_t i = 0; pr["points"].is_array() && i < pr["points"].size(); ++i) {
      cfg.probes.probes.push_back(
          {static_cast<int>(i), r.point(pr["points"][i], fmt::format("probes.points[{}]", i)), axis});
    }
  } else {
    cfg.probes.probes.push_back({0, {0.0, 1.2}, axis});
  }
  if (cfg.probes.probes.empty()) r.issues.push_back("probes: at least one probe is required");

  auto& ind = cfg.sweep.indicator;
  const json hg = root.value("h_grid", json::object());
  r.keys(hg, "h_grid", {"delta_S", "k_min", "k_max", "strict", "inv_h"});
  const double delta_S = r.number(hg, "delta_S", 0.5, "h_grid");
  const int k_min = r.integer(hg, "k_min", 2, "h_grid");
  const int k_max = r.integer(hg, "k_max", 9, "h_grid");
  const bool strict = r.boolean(hg, "strict", true, "h_grid");
  if (hg.contains("inv_h")) {
    if (strict) {
      r.issues.push_back("h_grid.inv_h: explicit 1/h values need \"strict\": false");
    } else {
      r.collect("h_grid", [&] { ind.grid = probe::free_h_grid(r.numbers(hg, "inv_h", {}, "h_grid")); });
    }
  } else {
    r.collect("h_grid", [&] { ind.grid = probe::h_grid(2, delta_S, k_min, k_max); });
  }
  if (ind.grid.size() < 3) r.issues.push_back("h_grid: at least three h values are needed for slope fits");

  const json cut = root.value("cutoff", json::object());
  r.keys(cut, "cutoff", {"delta_ratio"});
  ind.delta_ratio = r.number(cut, "delta_ratio", 0.1, "cutoff");

  const json sw = root.value("sweep", json::object());
  r.keys(sw, "sweep", {"t_lo", "t_hi", "tol", "carve_resolution"});
  cfg.sweep.t_lo = r.number(sw, "t_lo", cfg.sweep.t_lo, "sweep");
  cfg.sweep.t_hi = r.number(sw, "t_hi", cfg.sweep.t_hi, "sweep");
  cfg.sweep.tol = r.number(sw, "tol", cfg.sweep.tol, "sweep");
  cfg.carve_resolution = r.number(sw, "carve_resolution", cfg.carve_resolution, "sweep");

  const json me = root.value("mesh", json::object());
  r.keys(me, "mesh", {"target_edge", "face_edge", "min_angle", "cavity_segments", "jitter"});
  cfg.mesh.target_edge = r.number(me, "target_edge", 0.05, "mesh");
  cfg.mesh.face_edge = r.number(me, "face_edge", 0.25 * cfg.mesh.target_edge, "mesh");
  cfg.mesh.min_angle_degrees = r.number(me, "min_angle", 20.0, "mesh");
  cfg.mesh.jitter = r.number(me, "jitter", 0.0, "mesh");
  cfg.cavity_segments = r.integer(me, "cavity_segments", 128, "mesh");

  const json th = root.value("thresholds", json::object());
  r.keys(th, "thresholds", {"tau", "floor_factor", "overflow_cap", "lateral_leak_warn"});
  ind.tau = r.number(th, "tau", 0.10, "thresholds");
  ind.floor_factor = r.number(th, "floor_factor", 1e3, "thresholds");
  ind.probe.overflow_cap = r.number(th, "overflow_cap", 700.0, "thresholds");
  cfg.lateral_leak_warn = r.number(th, "lateral_leak_warn", 1e-6, "thresholds");

  const std::string data = r.string(root, "data", "localized", "config");
  if (data == "localized") {
    ind.mode = probe::DataMode::Localized;
  } else if (data == "full") {
    ind.mode = probe::DataMode::Full;
  } else {
    r.issues.push_back(fmt::format("data: expected \"localized\" or \"full\", got '{}'", data));
  }

  const json out = root.value("output", json::object());
  r.keys(out, "output", {"dir"});
  cfg.output_dir = r.string(out, "dir", "out", "output");
  cfg.workers = r.integer(root, "workers", 1, "config");
  cfg.seed = static_cast<std::uint64_t>(r.integer(root, "seed", 0, "config"));
  cfg.mesh.seed = cfg.seed;

  // Cross-field checks.
  if (!(cfg.sweep.t_lo > 0.0 && cfg.sweep.t_hi > cfg.sweep.t_lo)) r.issues.push_back("sweep: need 0 < t_lo < t_hi");
  if (!(cfg.sweep.tol > 0.0)) r.issues.push_back("sweep.tol: must be positive");
  if (!(cfg.carve_resolution > 0.0)) r.issues.push_back("sweep.carve_resolution: must be positive");
  if (!(cfg.mesh.target_edge > 0.0)) r.issues.push_back("mesh.target_edge: must be positive");
  if (!(cfg.mesh.face_edge > 0.0 && cfg.mesh.face_edge <= cfg.mesh.target_edge)) {
    r.issues.push_back("mesh.face_edge: must lie in (0, target_edge]");
  }
  if (!(cfg.mesh.min_angle_degrees > 0.0 && cfg.mesh.min_angle_degrees <= 25.0)) {
    r.issues.push_back("mesh.min_angle: must lie in (0, 25] degrees");
  }
  if (cfg.cavity_segments < 3) r.issues.push_back("mesh.cavity_segments: must be at least 3");
  if (!(ind.delta_ratio > 0.0)) r.issues.push_back("cutoff.delta_ratio: must be positive");
  if (!(ind.tau > 0.0)) r.issues.push_back("thresholds.tau: must be positive");
  if (!(ind.probe.overflow_cap > 0.0)) r.issues.push_back("thresholds.overflow_cap: must be positive");
  if (cfg.workers < 1) r.issues.push_back("workers: must be at least 1");

  if (cfg.halfwidth_auto) cfg.slab.halfwidth = auto_halfwidth(cfg);
  r.collect("geometry", [&] { cfg.slab.validate(); });
  if (cfg.slab.d1 < cfg.slab.d2) {
    if (cfg.cavity) r.collect("cavity", [&] { geometry::validate_cavity(*cfg.cavity, cfg.slab); });
    for (std::size_t i = 0; i < cfg.probes.probes.size(); ++i) {
      const auto& p = cfg.probes.probes[i];
      r.collect(fmt::format("probe {}", i), [&] {
        probe::ProbeParams params;
        params.p = p.p;
        params.axis = p.axis;
        params.t = cfg.sweep.t_lo;
        params.h = ind.grid.size() ? ind.grid.h(0) : 0.5;
        params.delta = ind.delta_ratio * cfg.sweep.t_lo;
        probe::validate_probe(params, cfg.slab);
      });
    }
  }
  r.collect("gamma", [&] { cfg.gamma.validate(); });

  if (!r.issues.empty()) throw ValidationError(std::move(r.issues));

  json canon;
  canon["run_id"] = cfg.run_id;
  canon["geometry"] = {{"d1", cfg.slab.d1}, {"d2", cfg.slab.d2}, {"halfwidth", cfg.slab.halfwidth},
                       {"halfwidth_auto", cfg.halfwidth_auto}};
  json bumps = json::array();
  for (const auto& b : cfg.gamma.bumps()) {
    bumps.push_back({{"center", to_json(b.center)}, {"radius", b.radius}, {"amplitude", b.amplitude}});
  }
  canon["gamma"] = {{"R", cfg.gamma.support_radius()}, {"background", cfg.gamma.background()}, {"bumps", bumps}};
  canon["cavity"] = cavity_json(cfg.cavity);
  json probes = json::array();
  for (const auto& p : cfg.probes.probes) probes.push_back({{"id", p.id}, {"p", to_json(p.p)}, {"axis", to_json(p.axis)}});
  canon["probes"] = probes;
  canon["h_grid"] = {{"delta_S", ind.grid.delta_S}, {"k", ind.grid.k_values}, {"inv_h", ind.grid.inv_h}};
  canon["cutoff"] = {{"delta_ratio", ind.delta_ratio}};
  canon["sweep"] = {{"t_lo", cfg.sweep.t_lo}, {"t_hi", cfg.sweep.t_hi}, {"tol", cfg.sweep.tol},
                    {"carve_resolution", cfg.carve_resolution}};
  canon["mesh"] = {{"target_edge", cfg.mesh.target_edge}, {"face_edge", cfg.mesh.face_edge}, {"min_angle", cfg.mesh.min_angle_degrees},
                   {"cavity_segments", cfg.cavity_segments}, {"jitter", cfg.mesh.jitter}};
  canon["thresholds"] = {{"tau", ind.tau}, {"floor_factor", ind.floor_factor},
                         {"overflow_cap", ind.probe.overflow_cap}, {"lateral_leak_warn", cfg.lateral_leak_warn}};
  canon["data"] = data;
  canon["seed"] = cfg.seed;
  cfg.canonical = canon.dump(2);
  cfg.hash = fmt::format("{:016x}", static_cast<std::uint64_t>(std::hash<std::string>{}(cfg.canonical)));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open config file {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace slabprobe::run
