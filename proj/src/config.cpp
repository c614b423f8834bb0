#include "nvmagnon/config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "nvmagnon/constants.hpp"
#include "nvmagnon/errors.hpp"

namespace nvmagnon {

namespace {

struct UnitInfo {
  Dimension dim;
  double factor;
};

const std::map<std::string, UnitInfo>& unit_table() {
  static const std::map<std::string, UnitInfo> table = {
      {"dimensionless", {Dimension::dimensionless, 1.0}},
      {"", {Dimension::dimensionless, 1.0}},
      {"Hz", {Dimension::frequency, constants::two_pi}},
      {"kHz", {Dimension::frequency, constants::two_pi * 1e3}},
      {"MHz", {Dimension::frequency, constants::two_pi * 1e6}},
      {"GHz", {Dimension::frequency, constants::two_pi * 1e9}},
      {"rad/s", {Dimension::frequency, 1.0}},
      {"GHz/T", {Dimension::gyromagnetic, constants::two_pi * 1e9}},
      {"rad/(s T)", {Dimension::gyromagnetic, 1.0}},
      {"T", {Dimension::field, 1.0}},
      {"mT", {Dimension::field, 1e-3}},
      {"m", {Dimension::length, 1.0}},
      {"μm", {Dimension::length, 1e-6}},
      {"um", {Dimension::length, 1e-6}},
      {"nm", {Dimension::length, 1e-9}},
      {"Å", {Dimension::length, 1e-10}},
      {"A", {Dimension::length, 1e-10}},
      {"s", {Dimension::time, 1.0}},
      {"ms", {Dimension::time, 1e-3}},
      {"μs", {Dimension::time, 1e-6}},
      {"us", {Dimension::time, 1e-6}},
      {"ns", {Dimension::time, 1e-9}},
      {"ps", {Dimension::time, 1e-12}},
      {"K", {Dimension::temperature, 1.0}},
      {"mK", {Dimension::temperature, 1e-3}},
      {"V/nm", {Dimension::electric, 1e9}},
      {"V/m", {Dimension::electric, 1.0}},
      {"J/m", {Dimension::stiffness, 1.0}},
      {"pJ/m", {Dimension::stiffness, 1e-12}},
      {"J", {Dimension::energy, 1.0}},
      {"eV", {Dimension::energy, constants::elementary_charge}},
  };
  return table;
}

const json& child(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(path + "." + key, "is required");
  return obj.at(key);
}

int read_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) throw ValidationError(path, "must be an integer");
  return node.get<int>();
}

std::string read_string(const json& node, const std::string& path) {
  if (!node.is_string()) throw ValidationError(path, "must be a string");
  return node.get<std::string>();
}

std::complex<double> read_entry(const json& node, const std::string& path) {
  if (node.is_number()) return node.get<double>();
  if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number())
    return {node[0].get<double>(), node[1].get<double>()};
  throw ValidationError(path, "matrix entries must be numbers or [re, im] pairs");
}

}  // namespace

double read_quantity(const json& node, Dimension dim, const std::string& path, bool allow_inf) {
  if (node.is_string()) {
    const auto s = node.get<std::string>();
    if (allow_inf && (s == "inf" || s == "infinity")) return std::numeric_limits<double>::infinity();
    throw ValidationError(path, "unexpected string '" + s + "'");
  }
  if (node.is_number()) {
    if (dim == Dimension::dimensionless) return node.get<double>();
    throw ValidationError(path, "needs a {value, unit} pair");
  }
  if (!node.is_object() || !node.contains("value"))
    throw ValidationError(path, "needs a {value, unit} pair");
  const json& v = node.at("value");
  double value;
  if (v.is_number()) {
    value = v.get<double>();
  } else if (allow_inf && v.is_string() && (v == "inf" || v == "infinity")) {
    return std::numeric_limits<double>::infinity();
  } else {
    throw ValidationError(path + ".value", "must be a number");
  }
  const std::string unit = node.contains("unit") ? read_string(node.at("unit"), path + ".unit") : "";
  const auto& table = unit_table();
  const auto it = table.find(unit);
  if (it == table.end()) throw ValidationError(path + ".unit", "unknown unit '" + unit + "'");
  if (it->second.dim != dim) {
    std::string ok;
    for (const auto& u : accepted_units(dim)) ok += (ok.empty() ? "" : ", ") + u;
    throw ValidationError(path + ".unit", "unit '" + unit + "' has the wrong dimension (accepted: " + ok + ")");
  }
  if (!std::isfinite(value)) throw ValidationError(path + ".value", "must be finite");
  return value * it->second.factor;
}

std::vector<std::string> accepted_units(Dimension dim) {
  std::vector<std::string> out;
  for (const auto& [name, info] : unit_table())
    if (info.dim == dim && !name.empty()) out.push_back(name);
  return out;
}

json default_document() {
  auto q = [](double v, const char* u) { return json{{"value", v}, {"unit", u}}; };
  return json{
      {"material",
       {{"J", q(33.42, "GHz")},
        {"s", 14.2},
        {"a", q(12.376, "Å")},
        {"mu0_Ms", q(175, "mT")},
        {"A_ex", q(3.7, "pJ/m")},
        {"E_SO", q(19, "eV")},
        {"gamma0", q(28.02, "GHz/T")},
        {"g", 2},
        {"J_from_stiffness", false}}},
      {"geometry", {{"N", 1000}, {"L_x", "auto"}, {"L_y", q(120, "nm")}, {"L_z", q(20, "nm")}, {"n_y", 0}}},
      {"fields", {{"B0", "resonance"}, {"b1_profile", "eta"}}},
      {"nv",
       {{"D", q(2.87, "GHz")},
        {"gamma_NV", q(28.02, "GHz/T")},
        {"z_NV", q(20, "nm")},
        {"x_positions", "quarter"},
        {"T1", "inf"},
        {"T2", "inf"}}},
      {"bath", {{"T", q(1, "mK")}}},
      {"initial_state", "plus-minus"},
      {"frame", "rotating"},
      {"steady", {{"kernel_tolerance", 1e-12}}},
      {"esd", {{"floor", 1e-4}}},
      {"markov", {{"t_max", q(100, "ns")}, {"dt", q(2, "ps")}}},
  };
}

namespace {

// Known keys per block; anything else is almost always a typo.
void check_keys(const json& doc) {
  static const std::map<std::string, std::set<std::string>> blocks = {
      {"", {"scenario", "description", "output", "material", "geometry", "fields", "nv", "bath", "initial_state",
            "frame", "steady", "esd", "markov", "time", "sweep"}},
      {"material", {"J", "s", "a", "mu0_Ms", "A_ex", "E_SO", "gamma0", "g", "J_from_stiffness"}},
      {"geometry", {"N", "L_x", "L_y", "L_z", "n_y"}},
      {"fields", {"B0", "B1", "epsilon", "E", "band_edge_dos", "b1_profile"}},
      {"nv", {"D", "gamma_NV", "z_NV", "x_positions", "T1", "T2"}},
      {"bath", {"T"}},
      {"steady", {"kernel_tolerance"}},
      {"esd", {"floor"}},
      {"markov", {"t_max", "dt"}},
      {"time", {"t_max", "samples", "grid", "t_min"}},
      {"sweep", {"path", "values"}},
  };
  for (const auto& [block, keys] : blocks) {
    const json* node = &doc;
    if (!block.empty()) {
      if (!doc.contains(block) || doc[block].is_null()) continue;
      node = &doc[block];
      if (!node->is_object()) throw ValidationError(block, "must be an object");
    }
    for (const auto& item : node->items())
      if (!keys.count(item.key()))
        throw ValidationError(block.empty() ? item.key() : block + "." + item.key(), "unknown key");
  }
}

}  // namespace

RunConfig parse_config(const json& user) {
  if (!user.is_object()) throw ValidationError("config", "must be a JSON object");
  json doc = default_document();
  doc.merge_patch(user);
  check_keys(doc);

  RunConfig cfg;
  cfg.document = doc;
  if (doc.contains("scenario")) cfg.scenario = read_string(doc["scenario"], "scenario");
  if (doc.contains("output")) cfg.output = read_string(doc["output"], "output");

  // material
  const json& m = doc["material"];
  const double spin = read_quantity(child(m, "s", "material"), Dimension::dimensionless, "material.s");
  const double lattice = read_quantity(child(m, "a", "material"), Dimension::length, "material.a");
  const double mu0ms = read_quantity(child(m, "mu0_Ms", "material"), Dimension::field, "material.mu0_Ms");
  const double stiffness = read_quantity(child(m, "A_ex", "material"), Dimension::stiffness, "material.A_ex");
  const double eso = read_quantity(child(m, "E_SO", "material"), Dimension::energy, "material.E_SO");
  const double gamma0 = read_quantity(child(m, "gamma0", "material"), Dimension::gyromagnetic, "material.gamma0");
  const double g = m.contains("g") ? read_quantity(m["g"], Dimension::dimensionless, "material.g") : 2.0;
  const bool from_stiffness = m.value("J_from_stiffness", false);
  if (from_stiffness) {
    cfg.material = MaterialParams::from_stiffness(stiffness, spin, lattice, mu0ms / constants::mu0, eso, gamma0, g);
  } else {
    cfg.material.exchange = read_quantity(child(m, "J", "material"), Dimension::frequency, "material.J");
    cfg.material.spin = spin;
    cfg.material.lattice = lattice;
    cfg.material.magnetization = mu0ms / constants::mu0;
    cfg.material.omega_m = gamma0 * mu0ms;
    cfg.material.stiffness = stiffness;
    cfg.material.spin_orbit = eso;
    cfg.material.gamma0 = gamma0;
    cfg.material.g_factor = g;
    cfg.material.validate();
  }

  // geometry
  const json& geo = doc["geometry"];
  cfg.geometry.sites = read_int(child(geo, "N", "geometry"), "geometry.N");
  if (cfg.geometry.sites < 2 || cfg.geometry.sites % 2 != 0)
    throw ValidationError("geometry.N", "must be an even integer >= 2");
  const json& lx = child(geo, "L_x", "geometry");
  cfg.geometry.length = lx.is_string() && lx == "auto" ? (cfg.geometry.sites - 1) * lattice
                                                       : read_quantity(lx, Dimension::length, "geometry.L_x");
  cfg.geometry.width = read_quantity(child(geo, "L_y", "geometry"), Dimension::length, "geometry.L_y");
  cfg.geometry.thickness = read_quantity(child(geo, "L_z", "geometry"), Dimension::length, "geometry.L_z");
  cfg.geometry.transverse_mode = geo.contains("n_y") ? read_int(geo["n_y"], "geometry.n_y") : 0;
  cfg.geometry.validate(cfg.material);

  // fields
  const json& f = doc["fields"];
  if (f.contains("B0")) {
    const json& b0 = f["B0"];
    if (!(b0.is_string() && b0 == "resonance")) {
      cfg.bias = read_quantity(b0, Dimension::field, "fields.B0");
      if (!(*cfg.bias > 0.0)) throw ValidationError("fields.B0", "must be positive");
    }
  }
  if (f.contains("B1") && f.contains("epsilon"))
    throw ValidationError("fields.epsilon", "give either fields.B1 or fields.epsilon, not both");
  if (f.contains("B1")) {
    cfg.injection = read_quantity(f["B1"], Dimension::field, "fields.B1");
    if (*cfg.injection < 0.0) throw ValidationError("fields.B1", "must be non-negative");
    if (*cfg.injection > FieldConfig::saturation_field)
      throw ValidationError("fields.B1", "exceeds the 0.5 T saturation bound");
  }
  if (f.contains("epsilon")) {
    cfg.epsilon = read_quantity(f["epsilon"], Dimension::dimensionless, "fields.epsilon");
    if (*cfg.epsilon < 0.0) throw ValidationError("fields.epsilon", "must be non-negative");
  }
  if (f.contains("E") && f.contains("band_edge_dos"))
    throw ValidationError("fields.band_edge_dos", "give either fields.E or fields.band_edge_dos, not both");
  if (f.contains("E")) {
    cfg.electric = read_quantity(f["E"], Dimension::electric, "fields.E");
    if (*cfg.electric < 0.0) throw ValidationError("fields.E", "must be non-negative");
  }
  if (f.contains("band_edge_dos")) {
    cfg.band_edge_dos = read_quantity(f["band_edge_dos"], Dimension::time, "fields.band_edge_dos");
    if (!(*cfg.band_edge_dos > 0.0)) throw ValidationError("fields.band_edge_dos", "must be positive");
  }
  if (f.contains("b1_profile")) cfg.b1_profile = read_string(f["b1_profile"], "fields.b1_profile");

  // nv
  const json& nv = doc["nv"];
  cfg.nv.zero_field_splitting = read_quantity(child(nv, "D", "nv"), Dimension::frequency, "nv.D");
  cfg.nv.gamma_nv = read_quantity(child(nv, "gamma_NV", "nv"), Dimension::gyromagnetic, "nv.gamma_NV");
  cfg.nv.height = read_quantity(child(nv, "z_NV", "nv"), Dimension::length, "nv.z_NV");
  const json& xp = child(nv, "x_positions", "nv");
  if (xp.is_string() && xp == "quarter") {
    cfg.nv.positions = {cfg.geometry.length / 4.0, -cfg.geometry.length / 4.0};
  } else if (xp.is_array() && xp.size() == 2) {
    for (int i = 0; i < 2; ++i)
      cfg.nv.positions[i] = read_quantity(xp[i], Dimension::length, "nv.x_positions." + std::to_string(i));
  } else {
    throw ValidationError("nv.x_positions", "must be \"quarter\" or a list of two lengths");
  }
  cfg.nv.t1 = read_quantity(child(nv, "T1", "nv"), Dimension::time, "nv.T1", true);
  cfg.nv.t2 = read_quantity(child(nv, "T2", "nv"), Dimension::time, "nv.T2", true);
  cfg.nv.validate(cfg.geometry);

  // bath
  cfg.temperature = read_quantity(child(doc["bath"], "T", "bath"), Dimension::temperature, "bath.T");
  if (cfg.temperature < 0.0) throw ValidationError("bath.T", "must be non-negative");

  // initial state
  const json& is = doc["initial_state"];
  if (is.is_string()) {
    cfg.initial_name = is.get<std::string>();
    cfg.initial = TwoQubitState::named(cfg.initial_name);
  } else if (is.is_array() && is.size() == 4) {
    Matrix4c rho;
    for (int i = 0; i < 4; ++i) {
      if (!is[i].is_array() || is[i].size() != 4) throw ValidationError("initial_state", "must be a 4x4 matrix");
      for (int j = 0; j < 4; ++j)
        rho(i, j) = read_entry(is[i][j], "initial_state." + std::to_string(i) + "." + std::to_string(j));
    }
    cfg.initial_name = "explicit";
    cfg.initial = TwoQubitState(rho);
    try {
      cfg.initial.validate();
    } catch (const PhysicsError& e) {
      throw ValidationError("initial_state", e.what());
    }
  } else {
    throw ValidationError("initial_state", "must be a state name or a 4x4 matrix");
  }

  // time grid
  if (doc.contains("time") && !doc["time"].is_null()) {
    const json& t = doc["time"];
    TimeGridConfig tg;
    tg.t_max = read_quantity(child(t, "t_max", "time"), Dimension::time, "time.t_max");
    tg.samples = read_int(child(t, "samples", "time"), "time.samples");
    tg.kind = t.contains("grid") ? parse_grid(read_string(t["grid"], "time.grid")) : GridKind::linear;
    if (t.contains("t_min")) tg.t_min = read_quantity(t["t_min"], Dimension::time, "time.t_min");
    if (!(tg.t_max > 0.0)) throw ValidationError("time.t_max", "must be positive");
    if (tg.samples < 2) throw ValidationError("time.samples", "must be at least 2");
    if (tg.kind == GridKind::log && !(tg.t_min > 0.0 && tg.t_min < tg.t_max))
      throw ValidationError("time.t_min", "log grid needs 0 < t_min < t_max");
    cfg.time = tg;
  }

  cfg.frame = parse_frame(read_string(doc["frame"], "frame"));

  if (doc.contains("sweep") && !doc["sweep"].is_null()) {
    const json& s = doc["sweep"];
    SweepConfig sc;
    sc.path = read_string(child(s, "path", "sweep"), "sweep.path");
    const json& vals = child(s, "values", "sweep");
    if (!vals.is_array() || vals.empty()) throw ValidationError("sweep.values", "must be a non-empty list");
    sc.values.assign(vals.begin(), vals.end());
    cfg.sweep = sc;
  }

  if (doc.contains("markov")) {
    const json& mk = doc["markov"];
    if (mk.contains("t_max")) cfg.markov.t_max = read_quantity(mk["t_max"], Dimension::time, "markov.t_max");
    if (mk.contains("dt")) cfg.markov.dt = read_quantity(mk["dt"], Dimension::time, "markov.dt");
    if (!(cfg.markov.dt > 0.0) || !(cfg.markov.t_max > cfg.markov.dt))
      throw ValidationError("markov", "needs 0 < dt < t_max");
  }
  if (doc.contains("steady") && doc["steady"].contains("kernel_tolerance")) {
    cfg.kernel_tolerance = read_quantity(doc["steady"]["kernel_tolerance"], Dimension::dimensionless,
                                         "steady.kernel_tolerance");
    if (!(cfg.kernel_tolerance > 0.0)) throw ValidationError("steady.kernel_tolerance", "must be positive");
  }
  if (doc.contains("esd") && doc["esd"].contains("floor")) {
    cfg.esd_floor = read_quantity(doc["esd"]["floor"], Dimension::dimensionless, "esd.floor");
    if (!(cfg.esd_floor > 0.0)) throw ValidationError("esd.floor", "must be positive");
  }
  return cfg;
}

void set_path(json& doc, const std::string& path, const json& value) {
  if (path.empty()) throw ValidationError("sweep.path", "must not be empty");
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    parts.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json* node = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (node->is_array()) {
      const std::size_t idx = std::stoul(p);
      if (idx >= node->size()) throw ValidationError("sweep.path", "index out of range in '" + path + "'");
      node = &(*node)[idx];
    } else if (node->is_object() && node->contains(p)) {
      node = &(*node)[p];
    } else {
      throw ValidationError("sweep.path", "'" + path + "' does not address an existing block");
    }
  }
  const std::string& leaf = parts.back();
  json* target = nullptr;
  if (node->is_array()) {
    const std::size_t idx = std::stoul(leaf);
    if (idx >= node->size()) throw ValidationError("sweep.path", "index out of range in '" + path + "'");
    target = &(*node)[idx];
  } else if (node->is_object()) {
    target = &(*node)[leaf];
  } else {
    throw ValidationError("sweep.path", "'" + path + "' does not address a scalar leaf");
  }
  if (target->is_object() && target->contains("value") && value.is_number())
    (*target)["value"] = value;
  else
    *target = value;
}

std::string config_hash(const json& doc) {
  const std::string s = doc.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nvmagnon
