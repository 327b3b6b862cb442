#include "blochguide/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Vec2 vec2(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

json material_to_json(const Material& m) {
  switch (m.kind) {
    case Material::Kind::constant:
      return {{"kind", "constant"}, {"value", m.value}};
    case Material::Kind::discs: {
      json centers = json::array();
      for (const auto& c : m.centers) centers.push_back({c[0], c[1]});
      return {{"kind", "discs"}, {"inside_value", m.inside_value}, {"background", m.value},
              {"radius", m.radius}, {"centers", centers}};
    }
    case Material::Kind::laminate:
      return {{"kind", "laminate"}, {"breaks", m.breaks}, {"values", m.layer_values}};
  }
  return {};
}

Material material_from_json(const json& j) {
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    check_keys(j, "material", {"kind", "value"});
    return Material::constant(j.value("value", 1.0));
  }
  if (kind == "discs") {
    check_keys(j, "material", {"kind", "inside_value", "background", "radius", "centers"});
    Material m = hole_crystal();
    get_if(j, "inside_value", m.inside_value);
    get_if(j, "background", m.value);
    get_if(j, "radius", m.radius);
    if (j.contains("centers")) {
      m.centers.clear();
      for (const auto& c : j.at("centers")) m.centers.push_back(vec2(c));
    }
    return m;
  }
  if (kind == "laminate") {
    check_keys(j, "material", {"kind", "breaks", "values"});
    return Material::laminate(j.at("breaks").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
  }
  throw ConfigError("material: unknown kind '" + kind + "'");
}

CoefficientSampling sampling_from(const std::string& s) {
  if (s == "barycenter") return CoefficientSampling::barycenter;
  if (s == "cell_average") return CoefficientSampling::cell_average;
  if (s == "grid_node") return CoefficientSampling::grid_node;
  throw ConfigError("medium: unknown sampling '" + s + "'");
}

json to_json(const RunConfig& c) {
  json j;
  const auto& g = c.geometry;
  j["geometry"] = {{"eps", g.eps}, {"R", g.R}, {"L", g.L}, {"K", g.K}, {"n1", g.n1}, {"n2", g.n2}};
  json med = {{"left", material_to_json(c.medium.left)},
              {"right", material_to_json(c.medium.right)},
              {"sampling", sampling_name(c.sampling)}};
  med["slab"] = c.medium.slab ? json{{"material", material_to_json(*c.medium.slab)}, {"width_cells", c.medium.slab_cells}}
                              : json(nullptr);
  j["medium"] = med;
  j["omega"] = c.omega;
  j["delta"] = c.delta;
  const auto& s = c.source;
  switch (s.kind) {
    case SourceConfig::Kind::none:
      j["source"] = {{"kind", "none"}};
      break;
    case SourceConfig::Kind::incoming:
      j["source"] = {{"kind", "incoming"},
                     {"q", s.q},
                     {"j_in", s.j_in ? json{(*s.j_in)[0], (*s.j_in)[1]} : json(nullptr)},
                     {"amplitude", {s.amplitude.real(), s.amplitude.imag()}},
                     {"d", s.d},
                     {"step_scale", s.step_scale}};
      break;
    case SourceConfig::Kind::gaussian:
      j["source"] = {{"kind", "gaussian"},
                     {"amplitude", s.g_amplitude},
                     {"decay", s.decay},
                     {"center", {s.center[0], s.center[1]}}};
      break;
  }
  const auto& o = c.selection;
  j["selection"] = {{"j1_mesh", o.j1_mesh},     {"n_bands", o.n_bands},   {"level_tol", o.level_tol_rel},
                    {"c0_rel", o.c0_rel},       {"c0", o.c0 ? json(*o.c0) : json(nullptr)},
                    {"j2_rows", o.j2_rows},     {"max_modes", o.max_modes}, {"max_iterations", o.max_iterations},
                    {"dj", o.dj},               {"orthonormalize", c.orthonormalize}};
  j["validate"] = {{"crystal", material_to_json(c.crystal)},
                   {"a_star", c.a_star ? json(*c.a_star) : json(nullptr)},
                   {"dj", c.homogenization_dj}};
  j["sweep"] = {{"deltas", c.sweep_deltas}};
  j["band"] = {{"mesh", c.band_mesh}, {"n_bands", c.band_count}};
  const auto& out = c.outputs;
  j["outputs"] = {{"field", out.field},       {"report", out.report}, {"timings", out.timings},
                  {"bands", out.bands},       {"selected", out.selected}, {"sweep", out.sweep},
                  {"write_field", out.write_field}};
  return j;
}

RunConfig from_json(const json& j) {
  check_keys(j, "config",
             {"geometry", "medium", "omega", "delta", "source", "selection", "validate", "sweep", "band", "outputs"});
  RunConfig c;
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    check_keys(g, "geometry", {"eps", "R", "L", "K", "n1", "n2"});
    get_if(g, "eps", c.geometry.eps);
    get_if(g, "R", c.geometry.R);
    get_if(g, "L", c.geometry.L);
    get_if(g, "K", c.geometry.K);
    get_if(g, "n1", c.geometry.n1);
    get_if(g, "n2", c.geometry.n2);
  }
  if (j.contains("medium")) {
    const auto& m = j.at("medium");
    check_keys(m, "medium", {"left", "right", "slab", "sampling"});
    if (m.contains("left")) c.medium.left = material_from_json(m.at("left"));
    if (m.contains("right")) c.medium.right = material_from_json(m.at("right"));
    if (m.contains("slab") && !m.at("slab").is_null()) {
      const auto& s = m.at("slab");
      check_keys(s, "slab", {"material", "width_cells"});
      c.medium.slab = s.contains("material") ? material_from_json(s.at("material")) : hole_crystal();
      c.medium.slab_cells = s.value("width_cells", 10);
    }
    if (m.contains("sampling")) c.sampling = sampling_from(m.at("sampling").get<std::string>());
  }
  get_if(j, "omega", c.omega);
  get_if(j, "delta", c.delta);
  if (j.contains("source")) {
    const auto& s = j.at("source");
    const std::string kind = s.value("kind", "incoming");
    if (kind == "none") {
      check_keys(s, "source", {"kind"});
      c.source.kind = SourceConfig::Kind::none;
    } else if (kind == "incoming") {
      check_keys(s, "source", {"kind", "q", "j_in", "amplitude", "d", "step_scale"});
      c.source.kind = SourceConfig::Kind::incoming;
      get_if(s, "q", c.source.q);
      if (s.contains("j_in") && !s.at("j_in").is_null()) c.source.j_in = vec2(s.at("j_in"));
      if (s.contains("amplitude")) {
        const auto a = vec2(s.at("amplitude"));
        c.source.amplitude = {a[0], a[1]};
      }
      get_if(s, "d", c.source.d);
      get_if(s, "step_scale", c.source.step_scale);
    } else if (kind == "gaussian") {
      check_keys(s, "source", {"kind", "amplitude", "decay", "center"});
      c.source.kind = SourceConfig::Kind::gaussian;
      get_if(s, "amplitude", c.source.g_amplitude);
      get_if(s, "decay", c.source.decay);
      if (s.contains("center")) c.source.center = vec2(s.at("center"));
    } else {
      throw ConfigError("source: unknown kind '" + kind + "'");
    }
  }
  if (j.contains("selection")) {
    const auto& s = j.at("selection");
    check_keys(s, "selection",
               {"j1_mesh", "n_bands", "level_tol", "c0_rel", "c0", "j2_rows", "max_modes", "max_iterations", "dj",
                "orthonormalize"});
    auto& o = c.selection;
    get_if(s, "j1_mesh", o.j1_mesh);
    get_if(s, "n_bands", o.n_bands);
    get_if(s, "level_tol", o.level_tol_rel);
    get_if(s, "c0_rel", o.c0_rel);
    if (s.contains("c0") && !s.at("c0").is_null()) o.c0 = s.at("c0").get<double>();
    get_if(s, "j2_rows", o.j2_rows);
    get_if(s, "max_modes", o.max_modes);
    get_if(s, "max_iterations", o.max_iterations);
    get_if(s, "dj", o.dj);
    get_if(s, "orthonormalize", c.orthonormalize);
  }
  if (j.contains("validate")) {
    const auto& v = j.at("validate");
    check_keys(v, "validate", {"crystal", "a_star", "dj"});
    if (v.contains("crystal")) c.crystal = material_from_json(v.at("crystal"));
    if (v.contains("a_star") && !v.at("a_star").is_null()) c.a_star = v.at("a_star").get<double>();
    get_if(v, "dj", c.homogenization_dj);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    check_keys(s, "sweep", {"deltas"});
    get_if(s, "deltas", c.sweep_deltas);
  }
  if (j.contains("band")) {
    const auto& b = j.at("band");
    check_keys(b, "band", {"mesh", "n_bands"});
    get_if(b, "mesh", c.band_mesh);
    get_if(b, "n_bands", c.band_count);
  }
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    check_keys(o, "outputs", {"field", "report", "timings", "bands", "selected", "sweep", "write_field"});
    get_if(o, "field", c.outputs.field);
    get_if(o, "report", c.outputs.report);
    get_if(o, "timings", c.outputs.timings);
    get_if(o, "bands", c.outputs.bands);
    get_if(o, "selected", c.outputs.selected);
    get_if(o, "sweep", c.outputs.sweep);
    get_if(o, "write_field", c.outputs.write_field);
  }
  c.validate();
  return c;
}

}  // namespace

const char* sampling_name(CoefficientSampling s) {
  switch (s) {
    case CoefficientSampling::barycenter:
      return "barycenter";
    case CoefficientSampling::cell_average:
      return "cell_average";
    case CoefficientSampling::grid_node:
      return "grid_node";
  }
  return "grid_node";
}

void RunConfig::validate() const {
  geometry.validate();
  medium.validate();
  crystal.validate();
  selection.validate();
  if (!(omega > 0.0)) throw ConfigError("config: omega must be positive");
  if (!(delta >= 0.0)) throw ConfigError("config: delta must be >= 0");
  if (a_star && !(*a_star > 0.0)) throw ConfigError("config: a_star must be positive");
  if (!(homogenization_dj >= 1e-4 && homogenization_dj <= 1e-2)) throw ConfigError("config: validate.dj must lie in [1e-4, 1e-2]");
  for (std::size_t i = 0; i < sweep_deltas.size(); ++i) {
    if (!(sweep_deltas[i] > 0.0)) throw ConfigError("config: sweep deltas must be positive");
    if (i > 0 && !(sweep_deltas[i] < sweep_deltas[i - 1])) throw ConfigError("config: sweep deltas must be descending");
  }
  if (band_mesh < 3 || band_count < 1) throw ConfigError("config: band mesh >= 3 and n_bands >= 1 required");
  if (source.kind == SourceConfig::Kind::incoming) {
    if (!(source.d > 0.0)) throw ConfigError("config: source.d must be positive");
    if (!(source.step_scale > 0.0)) throw ConfigError("config: source.step_scale must be positive");
  }
  if (source.kind == SourceConfig::Kind::gaussian && !(source.decay > 0.0)) {
    throw ConfigError("config: gaussian decay must be positive");
  }
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace blochguide
