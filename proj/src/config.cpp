#include "leobf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace leobf {

using nlohmann::json;

SolverKind solver_kind_from_string(const std::string& name) {
  if (name == "centralized") return SolverKind::kCentralized;
  if (name == "decentralized") return SolverKind::kDecentralized;
  if (name == "mrt") return SolverKind::kMrt;
  if (name == "zf") return SolverKind::kZf;
  if (name == "sss") return SolverKind::kSss;
  throw ConfigError("solver must be one of centralized|decentralized|mrt|zf|sss");
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kCentralized: return "centralized";
    case SolverKind::kDecentralized: return "decentralized";
    case SolverKind::kMrt: return "mrt";
    case SolverKind::kZf: return "zf";
    case SolverKind::kSss: return "sss";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  geometry.validate();
  channel.validate();
  if (scheduler != "cs" && scheduler != "rs") throw ConfigError("scheduler must be cs or rs");
  if (u_max < 1) throw ConfigError("u_max must be >= 1");
  if (n_drops < 1) throw ConfigError("n_drops must be >= 1");
  if (!sweep_axis.empty() && sweep_values.empty())
    throw ConfigError("sweep.values must be non-empty when sweep.axis is set");
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

ExperimentConfig parse(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    maybe(g, "earth_radius_km", cfg.geometry.earth_radius_km);
    maybe(g, "altitude_km", cfg.geometry.altitude_km);
    maybe(g, "planes", cfg.geometry.planes);
    maybe(g, "sats_per_plane", cfg.geometry.sats_per_plane);
    maybe(g, "inclination_deg", cfg.geometry.inclination_deg);
    maybe(g, "region_center_lat_deg", cfg.geometry.region_center_lat_deg);
    maybe(g, "region_center_lon_deg", cfg.geometry.region_center_lon_deg);
    maybe(g, "region_radius_km", cfg.geometry.region_radius_km);
    maybe(g, "serving_count", cfg.geometry.serving_count);
    maybe(g, "ut_count", cfg.geometry.ut_count);
  }
  if (j.contains("channel")) {
    const json& c = j.at("channel");
    maybe(c, "f_c_hz", cfg.channel.f_c_hz);
    maybe(c, "bandwidth_hz", cfg.channel.bandwidth_hz);
    maybe(c, "noise_figure_db", cfg.channel.noise_figure_db);
    maybe(c, "noise_psd_dbm_hz", cfg.channel.noise_psd_dbm_hz);
    if (c.contains("kappa_db_range")) {
      const auto range = c.at("kappa_db_range").get<std::vector<double>>();
      if (range.size() != 2) throw ConfigError("channel.kappa_db_range must have two entries");
      cfg.channel.kappa_db_min = range[0];
      cfg.channel.kappa_db_max = range[1];
    }
    if (c.contains("array")) {
      maybe(c.at("array"), "n_h", cfg.channel.array.n_h);
      maybe(c.at("array"), "n_v", cfg.channel.array.n_v);
      maybe(c.at("array"), "spacing_over_lambda", cfg.channel.array.spacing_over_lambda);
    }
    cfg.channel.array.carrier_hz = cfg.channel.f_c_hz;
  }
  if (j.contains("scheduler")) cfg.scheduler = j.at("scheduler").get<std::string>();
  if (j.contains("solver")) cfg.solver = solver_kind_from_string(j.at("solver").get<std::string>());
  if (j.contains("topology")) {
    const json& t = j.at("topology");
    if (t.contains("kind")) cfg.topology = topology_kind_from_string(t.at("kind").get<std::string>());
    if (t.contains("edges"))
      for (const auto& e : t.at("edges"))
        cfg.topology_edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  maybe(j, "power_budget_dbm", cfg.power_budget_dbm);
  maybe(j, "u_max", cfg.u_max);
  maybe(j, "rho_g", cfg.decentralized.rho_g);
  if (j.contains("schedule")) {
    const auto s = j.at("schedule").get<std::string>();
    if (s == "flattened")
      cfg.decentralized.schedule = DecentralizedOptions::Schedule::kFlattened;
    else if (s == "nested")
      cfg.decentralized.schedule = DecentralizedOptions::Schedule::kNested;
    else
      throw ConfigError("schedule must be flattened or nested");
  }
  maybe(j, "max_outer", cfg.decentralized.max_outer);
  maybe(j, "inner_tol", cfg.decentralized.inner_tol);
  maybe(j, "max_inner", cfg.decentralized.max_inner);
  if (j.contains("tol")) {
    cfg.decentralized.tol = j.at("tol").get<double>();
    cfg.centralized.tol = cfg.decentralized.tol;
  }
  if (j.contains("centralized")) {
    const json& c = j.at("centralized");
    maybe(c, "tol", cfg.centralized.tol);
    maybe(c, "max_outer", cfg.centralized.max_outer);
    maybe(c, "bcd_tol", cfg.centralized.bcd_tol);
    maybe(c, "max_sweeps", cfg.centralized.max_sweeps);
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    maybe(t, "line_search_tol", cfg.decentralized.line_search.h_tol_rel);
    maybe(t, "eig_floor", cfg.decentralized.line_search.eig_floor_rel);
    cfg.centralized.line_search = cfg.decentralized.line_search;
  }
  if (j.contains("sweep")) {
    maybe(j.at("sweep"), "axis", cfg.sweep_axis);
    if (j.at("sweep").contains("values"))
      cfg.sweep_values = j.at("sweep").at("values").get<std::vector<double>>();
  }
  maybe(j, "n_drops", cfg.n_drops);
  maybe(j, "seed", cfg.seed);
  maybe(j, "output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  return parse(json::parse(text));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
  json j;
  j["geometry"] = {{"earth_radius_km", cfg.geometry.earth_radius_km},
                   {"altitude_km", cfg.geometry.altitude_km},
                   {"planes", cfg.geometry.planes},
                   {"sats_per_plane", cfg.geometry.sats_per_plane},
                   {"inclination_deg", cfg.geometry.inclination_deg},
                   {"region_center_lat_deg", cfg.geometry.region_center_lat_deg},
                   {"region_center_lon_deg", cfg.geometry.region_center_lon_deg},
                   {"region_radius_km", cfg.geometry.region_radius_km},
                   {"serving_count", cfg.geometry.serving_count},
                   {"ut_count", cfg.geometry.ut_count}};
  j["channel"] = {{"f_c_hz", cfg.channel.f_c_hz},
                  {"bandwidth_hz", cfg.channel.bandwidth_hz},
                  {"noise_figure_db", cfg.channel.noise_figure_db},
                  {"noise_psd_dbm_hz", cfg.channel.noise_psd_dbm_hz},
                  {"kappa_db_range", {cfg.channel.kappa_db_min, cfg.channel.kappa_db_max}},
                  {"array", {{"n_h", cfg.channel.array.n_h},
                             {"n_v", cfg.channel.array.n_v},
                             {"spacing_over_lambda", cfg.channel.array.spacing_over_lambda}}}};
  j["scheduler"] = cfg.scheduler;
  j["solver"] = to_string(cfg.solver);
  j["topology"] = {{"kind", to_string(cfg.topology)}};
  if (!cfg.topology_edges.empty()) {
    json edges = json::array();
    for (auto [a, b] : cfg.topology_edges) edges.push_back({a, b});
    j["topology"]["edges"] = edges;
  }
  j["power_budget_dbm"] = cfg.power_budget_dbm;
  j["u_max"] = cfg.u_max;
  j["rho_g"] = cfg.decentralized.rho_g;
  j["schedule"] = cfg.decentralized.schedule == DecentralizedOptions::Schedule::kFlattened
                      ? "flattened"
                      : "nested";
  j["max_outer"] = cfg.decentralized.max_outer;
  j["inner_tol"] = cfg.decentralized.inner_tol;
  j["max_inner"] = cfg.decentralized.max_inner;
  j["tol"] = cfg.decentralized.tol;
  j["centralized"] = {{"tol", cfg.centralized.tol},
                      {"max_outer", cfg.centralized.max_outer},
                      {"bcd_tol", cfg.centralized.bcd_tol},
                      {"max_sweeps", cfg.centralized.max_sweeps}};
  if (!cfg.sweep_axis.empty()) j["sweep"] = {{"axis", cfg.sweep_axis}, {"values", cfg.sweep_values}};
  j["n_drops"] = cfg.n_drops;
  j["seed"] = cfg.seed;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical text.
  const std::string text = canonical_config_text(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig apply_axis(const ExperimentConfig& base, const std::string& axis, double value) {
  ExperimentConfig cfg = base;
  if (axis == "power_dbm") {
    cfg.power_budget_dbm = value;
  } else if (axis == "n_antennas") {
    const int n = static_cast<int>(std::llround(value));
    const int side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
    if (side * side != n) throw ConfigError("sweep n_antennas values must be perfect squares");
    cfg.channel.array.n_h = side;
    cfg.channel.array.n_v = side;
  } else if (axis == "n_sats") {
    cfg.geometry.serving_count = static_cast<int>(std::llround(value));
  } else if (axis == "n_uts") {
    cfg.geometry.ut_count = static_cast<int>(std::llround(value));
  } else {
    throw ConfigError("sweep axis must be one of power_dbm|n_antennas|n_sats|n_uts");
  }
  cfg.validate();
  return cfg;
}

}  // namespace leobf
