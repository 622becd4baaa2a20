#include "attkit_tools/scenario_json.hpp"

#include <fstream>
#include <stdexcept>

namespace attkit::tools {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("scenario: '" + key + "' must be a 3-array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json mat_to_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

Mat3 mat_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("scenario: '" + key + "' must be a 3x3 array");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 3)
      throw std::invalid_argument("scenario: '" + key + "' must be a 3x3 array");
    for (int c = 0; c < 3; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json profile_to_json(const VectorProfile& p) {
  json j;
  switch (p.type) {
    case VectorProfile::Type::Zero:
      j["type"] = "zero";
      break;
    case VectorProfile::Type::Constant:
      j["type"] = "constant";
      j["value"] = vec_to_json(p.amplitude);
      break;
    case VectorProfile::Type::Sinusoid:
      j["type"] = "sinusoid";
      j["amplitude"] = vec_to_json(p.amplitude);
      j["frequency"] = vec_to_json(p.frequency);
      j["phase"] = vec_to_json(p.phase);
      break;
    case VectorProfile::Type::ScaledCosine:
      j["type"] = "scaled_cosine";
      j["base"] = vec_to_json(p.amplitude);
      j["depth"] = p.depth;
      j["rate"] = p.rate;
      break;
  }
  return j;
}

VectorProfile profile_from_json(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("scenario: '" + key + "' needs a profile object with 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return VectorProfile::zero();
  if (type == "constant") return VectorProfile::constant(vec_from_json(j.at("value"), key));
  if (type == "sinusoid")
    return VectorProfile::sinusoid(vec_from_json(j.at("amplitude"), key),
                                   vec_from_json(j.at("frequency"), key),
                                   vec_from_json(j.at("phase"), key));
  if (type == "scaled_cosine")
    return VectorProfile::scaled_cosine(vec_from_json(j.at("base"), key),
                                        j.at("depth").get<double>(),
                                        j.at("rate").get<double>());
  throw std::invalid_argument("scenario: unknown profile type '" + type + "' in '" + key + "'");
}

}  // namespace

json scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["omega_profile"] = profile_to_json(c.omega_profile);
  j["bias_profile"] = profile_to_json(c.bias_profile);
  json vecs = json::array();
  for (const Vec3& a : c.inertial) vecs.push_back(vec_to_json(a));
  j["inertial_vectors"] = vecs;
  j["rho"] = c.rho;
  j["gains"]["gamma_p"] = c.gains.gamma_p;
  j["gains"]["gamma_i"] = c.gains.gamma_i;
  if (c.gains.bias_bound) j["gains"]["bias_bound"] = *c.gains.bias_bound;
  j["k"] = c.k;
  j["delta_fraction"] = c.delta_fraction;
  j["r0_truth"] = mat_to_json(c.r0_truth);
  j["r0_hat"] = mat_to_json(c.r0_hat);
  j["bhat0"] = vec_to_json(c.bhat0);
  j["q0"] = c.q0;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["record_stride"] = c.record_stride;
  json modes = json::array();
  for (ObserverMode m : c.modes) modes.push_back(to_string(m));
  j["modes"] = modes;
  return j;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig c;
  try {
    c.name = j.value("name", "scenario");
    c.omega_profile = profile_from_json(j.at("omega_profile"), "omega_profile");
    c.bias_profile = profile_from_json(j.at("bias_profile"), "bias_profile");
    for (const json& v : j.at("inertial_vectors"))
      c.inertial.push_back(vec_from_json(v, "inertial_vectors"));
    c.rho = j.at("rho").get<std::vector<double>>();
    const json& g = j.at("gains");
    c.gains.gamma_p = g.at("gamma_p").get<double>();
    c.gains.gamma_i = g.at("gamma_i").get<double>();
    if (g.contains("bias_bound")) c.gains.bias_bound = g.at("bias_bound").get<double>();
    c.k = j.at("k").get<double>();
    c.delta_fraction = j.value("delta_fraction", 0.8);
    c.r0_truth = mat_from_json(j.at("r0_truth"), "r0_truth");
    c.r0_hat = mat_from_json(j.at("r0_hat"), "r0_hat");
    c.bhat0 = vec_from_json(j.value("bhat0", json::array({0.0, 0.0, 0.0})), "bhat0");
    c.q0 = j.value("q0", std::size_t{0});
    c.dt = j.value("dt", 1e-3);
    c.t_end = j.value("t_end", 60.0);
    c.record_stride = j.value("record_stride", 10);
    for (const json& m : j.at("modes")) {
      const std::string name = m.get<std::string>();
      const auto mode = parse_observer_mode(name);
      if (!mode) throw std::invalid_argument("scenario: unknown mode '" + name + "'");
      c.modes.push_back(*mode);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: malformed document: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("scenario: parse error in '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("scenario: cannot write '" + path + "'");
  out << scenario_to_json(config).dump(2) << "\n";
}

}  // namespace attkit::tools
