#include "pyro/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"

namespace pyro {

using nlohmann::json;

namespace {

// Metakaolin (Al2O3 * 2 SiO2) splits into its constituents by mass.
constexpr double kMetakaolinSiO2 = 120.18 / 222.14;
constexpr double kMetakaolinAl2O3 = 101.96 / 222.14;

void expand_metakaolin(std::map<std::string, double>* kg_s) {
  auto it = kg_s->find("Metakaolin");
  if (it == kg_s->end()) return;
  const double m = it->second;
  kg_s->erase(it);
  (*kg_s)["SiO2"] += m * kMetakaolinSiO2;
  (*kg_s)["Al2O3"] += m * kMetakaolinAl2O3;
}

CycloneDims cyclone_dims(double h_t, double h_c, double h_x, double A_in,
                         double r_c, double r_r, double r_w, double r_d,
                         double r_x, double r_in, double w_in, double l_in) {
  CycloneDims d;
  d.h_t = h_t;
  d.h_c = h_c;
  d.h_x = h_x;
  d.A_in = A_in;
  d.r_c = r_c;
  d.r_r = r_r;
  d.r_w = r_w;
  d.r_d = r_d;
  d.r_x = r_x;
  d.r_in = r_in;
  d.w_in = w_in;
  d.l_in = l_in;
  return d;
}

// Ducts are tabulated as (total height, cone length); risers carry their
// cone at the top, the calciner's entry is listed over the full height with
// equal radii (a plain cylinder).
DuctDims duct_dims(double h_tot, double cone_len, bool cone_on_top,
                   double r_c, double r_r, double r_w, double r_l,
                   double r_u) {
  DuctDims d;
  d.h_tot = h_tot;
  if (cone_on_top) {
    d.h_cl = 0.0;
    d.h_cu = h_tot - cone_len;
  } else {
    d.h_cl = cone_len;
    d.h_cu = h_tot;
  }
  d.r_c = r_c;
  d.r_r = r_r;
  d.r_w = r_w;
  d.r_l = r_l;
  d.r_u = r_u;
  d.n_segments = 3;
  return d;
}

void validate_species_map(const std::map<std::string, double>& kg_s,
                          const std::string& field, bool allow_metakaolin) {
  for (const auto& [name, value] : kg_s) {
    if (value < 0.0)
      throw Error(field + "." + name + ": flow must be nonnegative");
    if (name == "Metakaolin") {
      if (!allow_metakaolin)
        throw Error(field + ": Metakaolin only allowed in the meal");
      continue;
    }
    if (species_index(name) >= kNumSpecies)
      throw Error(field + ": unknown species " + name);
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig c;

  c.meal_kg_s = {{"CaCO3", 69.5}, {"SiO2", 7.5},       {"Al2O3", 0.1},
                 {"Fe2O3", 1.7},  {"Metakaolin", 6.9}};
  c.calciner_fuel_kg_s = {{"Csus", 4.46}, {"CaO", 0.01}, {"SiO2", 0.37},
                          {"Al2O3", 0.23}, {"Fe2O3", 0.025}, {"N2", 1.50},
                          {"O2", 2.16},   {"Ar", 0.03},  {"H2O", 0.02}};
  c.kiln_fuel_kg_s = {{"Csus", 1.98}, {"SiO2", 0.05}, {"Al2O3", 0.03},
                      {"N2", 1.10},   {"O2", 0.34},   {"Ar", 0.02}};
  c.primary_air_kg_s = {
      {"N2", 1.51}, {"O2", 0.46}, {"Ar", 0.026}, {"H2O", 0.01}};

  Flowsheet& p = c.plant;
  p.cyclones[0].dims = cyclone_dims(18.28, 7.43, 3.45, 10.95, 3.45, 3.59,
                                    3.60, 0.32, 1.92, 2.76, 1.38, 0.1);
  p.cyclones[1].dims = cyclone_dims(11.38, 7.28, 3.41, 13.34, 3.41, 3.59,
                                    3.60, 0.45, 2.43, 2.73, 1.37, 0.1);
  p.cyclones[2].dims = cyclone_dims(11.24, 7.79, 3.38, 13.70, 3.38, 3.59,
                                    3.60, 0.45, 2.48, 2.70, 1.35, 0.1);
  p.cyclones[3].dims = cyclone_dims(11.98, 8.13, 3.53, 14.83, 3.51, 3.74,
                                    3.75, 0.45, 2.58, 2.82, 1.41, 0.1);
  p.cyclones[4].dims = cyclone_dims(11.94, 8.09, 3.54, 14.83, 3.54, 3.74,
                                    3.75, 0.45, 2.58, 2.83, 1.42, 0.1);
  const double cy_f0[5] = {575, 1280, 1380, 1430, 350};
  const double cy_fc[5] = {6.5, 4.2, 4.85, 5.2, 6.72};
  const double cy_fN[5] = {1.0 / 22.0, 1.0 / 10.1, 1.0 / 8.5, 1.0 / 7.3,
                           1.0 / 4.2};
  for (int i = 0; i < 5; ++i) {
    p.cyclones[i].f0 = cy_f0[i];
    p.cyclones[i].tune = CycloneTuning{cy_fc[i], cy_fN[i], 20e-6};
  }

  p.risers[0].dims = duct_dims(21.38, 4.83, true, 2.45, 2.47, 2.48, 2.45, 1.72);
  p.risers[1].dims = duct_dims(19.38, 4.18, true, 2.45, 2.47, 2.48, 2.45, 1.90);
  p.risers[2].dims = duct_dims(20.37, 4.18, true, 2.55, 2.57, 2.58, 2.45, 1.90);
  p.risers[3].dims = duct_dims(19.87, 4.37, true, 2.55, 2.57, 2.58, 2.45, 1.99);
  p.risers[4].dims = duct_dims(61.00, 61.00, true, 1.13, 1.33, 1.34, 1.13, 1.13);
  const double riser_f0[5] = {78, 55, 65, 60, 55};
  const double riser_fall[5] = {0.001, 0.001, 0.001, 0.0, 0.0};
  for (int i = 0; i < 5; ++i) {
    p.risers[i].f0 = riser_f0[i];
    p.risers[i].p_fall = riser_fall[i];
  }
  p.calciner.dims = duct_dims(33.0, 33.0, false, 3.08, 3.29, 3.30, 3.08, 3.08);
  p.calciner.f0 = 1350.0;

  p.kiln.dims.L = 51.0;
  p.kiln.dims.r_c = 1.98;
  p.kiln.dims.r_r = 2.18;
  p.kiln.dims.tilt = deg_to_rad(2.0);
  p.kiln.dims.n_segments = 10;
  p.kiln.porosity = 8.0 / 9.0;
  p.kiln.f0 = 2.0;
  p.kiln.beta_gs_factor = 3.0;

  p.cooler.dims.L = 36.0;
  p.cooler.dims.h = 3.0;
  p.cooler.dims.w = 4.0;
  p.cooler.dims.n_segments = 5;
  p.cooler.dims.roof_areas = {12.1, 22.5, 49.0, 60.5};
  p.cooler.porosity = 0.4;
  p.cooler.D_p = 0.04;
  p.cooler.f0 = 100.0;

  // False air per unit [m3/s at ambient].
  const double fa[Flowsheet::kNumUnits] = {0.92, 0.90, 0.44, 0.44, 0.44,
                                           0.45, 0.45, 0.44, 0.44, 0.0,
                                           3.22, 0.83, 0.0};
  for (int u = 0; u < Flowsheet::kNumUnits; ++u) p.false_air_m3s[u] = fa[u];

  c.schedule.push_back({5.0, {{"Metakaolin", 1.0}}, {}, {}, {}});
  return c;
}

MolarFeed ScenarioConfig::make_feed(const CompoundTable& table,
                                    const std::map<std::string, double>& kg_s,
                                    double T_C) const {
  std::map<std::string, double> expanded = kg_s;
  expand_metakaolin(&expanded);
  MolarFeed feed;
  feed.T = celsius_to_kelvin(T_C);
  for (const auto& [name, mass] : expanded) {
    const std::size_t i = species_index(name);
    if (i >= kNumSpecies) throw Error("make_feed: unknown species " + name);
    const double mol = mass / table.molar_mass(i);
    if (i < kNumSolids)
      feed.solids[i] += mol;
    else
      feed.gases[i - kNumSolids] += mol;
  }
  return feed;
}

std::shared_ptr<Flowsheet> ScenarioConfig::build() const {
  validate_species_map(meal_kg_s, "meal", true);
  validate_species_map(calciner_fuel_kg_s, "calciner_fuel", false);
  validate_species_map(kiln_fuel_kg_s, "kiln_fuel", false);
  validate_species_map(primary_air_kg_s, "primary_air", false);
  if (cooler_air_total_m3_s < 0.0)
    throw Error("cooler_air_total_m3_s must be nonnegative");

  auto fs = std::make_shared<Flowsheet>(plant);
  PlantShared& sh = fs->shared;
  sh.table = compounds_file.empty()
                 ? CompoundTable::builtin(h2o_sutherland_S)
                 : CompoundTable::load(compounds_file, h2o_sutherland_S);
  sh.reactions = reactions_file.empty()
                     ? ReactionSet::builtin(kinetics_profile)
                     : ReactionSet::load(reactions_file, kinetics_profile);
  for (const auto& [name, scale] : tuning_overrides) {
    if (name.size() < 2 || name[0] != 'r')
      throw Error("kinetics.tuning: keys are r1..r12, got " + name);
    const int idx_r = std::stoi(name.substr(1)) - 1;
    if (idx_r < 0 || idx_r >= static_cast<int>(kNumReactions))
      throw Error("kinetics.tuning: unknown reaction " + name);
    sh.reactions.law(idx_r).tuning_scale = scale;
  }
  if (!(plant.kiln.porosity >= 0.0 && plant.kiln.porosity < 1.0))
    throw Error("kiln porosity must lie in [0, 1)");
  if (!(plant.cooler.porosity >= 0.0 && plant.cooler.porosity < 1.0))
    throw Error("cooler porosity must lie in [0, 1)");
  if (emissivity_mode == "constant") {
    sh.emissivity_model.mode = EmissivityModel::Mode::Constant;
  } else if (emissivity_mode == "wsgg") {
    sh.emissivity_model.mode = EmissivityModel::Mode::Wsgg;
    if (wsgg_file.empty())
      throw Error("emissivity_mode wsgg requires wsgg_file");
    sh.emissivity_model.wsgg = WsggCoefficients::load(wsgg_file);
  } else {
    throw Error("unknown emissivity mode: " + emissivity_mode);
  }
  sh.emissivity_model.constant_eps_g = constant_eps_g;
  sh.T_env = celsius_to_kelvin(ambient_T_C);
  sh.P_env = bar_to_pa(ambient_P_bar);

  // Ambient composition from the primary-air mass ratios.
  {
    double total = 0.0;
    GasVec mol{};
    for (const auto& [name, mass] : primary_air_kg_s) {
      const std::size_t i = species_index(name);
      mol[i - kNumSolids] = mass / sh.table.molar_mass(i);
      total += mol[i - kNumSolids];
    }
    for (std::size_t i = 0; i < kNumGases; ++i)
      sh.ambient_mole_frac[i] = total > 0.0 ? mol[i] / total : 0.0;
  }

  BoundarySpec& b = fs->boundary;
  b.P_out = bar_to_pa(P_out_bar);
  b.meal = make_feed(sh.table, meal_kg_s, meal_T_C);
  b.calciner_fuel =
      make_feed(sh.table, calciner_fuel_kg_s, calciner_fuel_T_C);
  b.kiln_fuel = make_feed(sh.table, kiln_fuel_kg_s, kiln_fuel_T_C);
  b.primary_air = make_feed(sh.table, primary_air_kg_s, primary_air_T_C);
  b.omega = rpm_to_rad_s(omega_rpm);
  b.v_grate = v_grate_m_s;

  // Cooling air split normalized over the cooler segments; the published
  // percentages (28 + 4 x 27) exceed 100 and are treated as weights.
  double split_sum = 0.0;
  for (double w : cooler_air_split) split_sum += w;
  b.fan_feeds.clear();
  const double mol_total = sh.P_env * cooler_air_total_m3_s /
                           (kGasConstant * sh.T_env);
  for (int k = 0; k < plant.cooler.dims.n_segments; ++k) {
    MolarFeed fan;
    fan.T = sh.T_env;
    const double frac =
        k < 5 ? cooler_air_split[k] / split_sum : 0.0;
    fan.gases = fs->ambient_molar(mol_total * frac);
    b.fan_feeds.push_back(fan);
  }

  fs->finalize();
  return fs;
}

std::vector<ScheduledEvent> ScenarioConfig::make_schedule(
    const std::shared_ptr<Flowsheet>& fs) const {
  std::vector<ScheduledEvent> events;
  // Events applied in order mutate running copies of the feed maps so
  // successive patches compound.
  auto meal = std::make_shared<std::map<std::string, double>>(meal_kg_s);
  auto ca_fuel =
      std::make_shared<std::map<std::string, double>>(calciner_fuel_kg_s);
  auto k_fuel = std::make_shared<std::map<std::string, double>>(kiln_fuel_kg_s);
  const double T_meal = meal_T_C, T_ca = calciner_fuel_T_C,
               T_k = kiln_fuel_T_C;
  for (const ScenarioEvent& ev : schedule) {
    ScheduledEvent out;
    out.t = ev.t_hours * 3600.0;
    out.name = "event@" + std::to_string(ev.t_hours) + "h";
    const ScenarioEvent patch = ev;
    out.apply = [patch, fs, meal, ca_fuel, k_fuel, T_meal, T_ca,
                 T_k](BoundarySpec& b) {
      const ScenarioConfig helper;  // make_feed uses only the table argument
      for (const auto& [name, v] : patch.set_meal_kg_s) (*meal)[name] = v;
      for (const auto& [name, v] : patch.add_meal_kg_s) (*meal)[name] += v;
      b.meal = helper.make_feed(fs->shared.table, *meal, T_meal);
      if (!patch.add_calciner_fuel_kg_s.empty()) {
        for (const auto& [name, v] : patch.add_calciner_fuel_kg_s)
          (*ca_fuel)[name] += v;
        b.calciner_fuel = helper.make_feed(fs->shared.table, *ca_fuel, T_ca);
      }
      if (!patch.add_kiln_fuel_kg_s.empty()) {
        for (const auto& [name, v] : patch.add_kiln_fuel_kg_s)
          (*k_fuel)[name] += v;
        b.kiln_fuel = helper.make_feed(fs->shared.table, *k_fuel, T_k);
      }
    };
    events.push_back(std::move(out));
  }
  return events;
}

// --- JSON ----------------------------------------------------------------------

namespace {

std::map<std::string, double> read_map(const json& j) {
  std::map<std::string, double> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out[it.key()] = it.value().get<double>();
  return out;
}

void maybe(const json& j, const char* key, double* value) {
  if (j.contains(key)) *value = j.at(key).get<double>();
}
void maybe_int(const json& j, const char* key, int* value) {
  if (j.contains(key)) *value = j.at(key).get<int>();
}
void maybe_str(const json& j, const char* key, std::string* value) {
  if (j.contains(key)) *value = j.at(key).get<std::string>();
}

void read_cyclone(const json& j, CycloneUnit* cy) {
  maybe(j, "h_t", &cy->dims.h_t);
  maybe(j, "h_c", &cy->dims.h_c);
  maybe(j, "h_x", &cy->dims.h_x);
  maybe(j, "A_in", &cy->dims.A_in);
  maybe(j, "r_c", &cy->dims.r_c);
  maybe(j, "r_r", &cy->dims.r_r);
  maybe(j, "r_w", &cy->dims.r_w);
  maybe(j, "r_d", &cy->dims.r_d);
  maybe(j, "r_x", &cy->dims.r_x);
  maybe(j, "r_in", &cy->dims.r_in);
  maybe(j, "w_in", &cy->dims.w_in);
  maybe(j, "l_in", &cy->dims.l_in);
  maybe(j, "f0", &cy->f0);
  maybe(j, "f_c", &cy->tune.f_c);
  maybe(j, "f_N", &cy->tune.f_N);
  if (j.contains("d_m_um")) cy->tune.d_m = j.at("d_m_um").get<double>() * 1e-6;
}

void read_duct(const json& j, DuctUnit* d) {
  maybe(j, "h_tot", &d->dims.h_tot);
  maybe(j, "h_cl", &d->dims.h_cl);
  maybe(j, "h_cu", &d->dims.h_cu);
  maybe(j, "r_c", &d->dims.r_c);
  maybe(j, "r_r", &d->dims.r_r);
  maybe(j, "r_w", &d->dims.r_w);
  maybe(j, "r_l", &d->dims.r_l);
  maybe(j, "r_u", &d->dims.r_u);
  maybe_int(j, "n_segments", &d->dims.n_segments);
  maybe(j, "f0", &d->f0);
  if (j.contains("p_fall_percent"))
    d->p_fall = j.at("p_fall_percent").get<double>() / 100.0;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  ScenarioConfig c = defaults();
  if (text.empty()) return c;
  json j;
  try {
    j = json::parse(text, nullptr, true, true);  // allow comments
  } catch (const json::exception& e) {
    throw Error(std::string("scenario parse error: ") + e.what());
  }
  if (j.is_null()) return c;

  maybe_str(j, "kinetics_profile", &c.kinetics_profile);
  maybe_str(j, "compounds_file", &c.compounds_file);
  maybe_str(j, "reactions_file", &c.reactions_file);
  maybe_str(j, "wsgg_file", &c.wsgg_file);
  maybe_str(j, "emissivity_mode", &c.emissivity_mode);
  maybe(j, "constant_eps_g", &c.constant_eps_g);
  maybe(j, "h2o_sutherland_S", &c.h2o_sutherland_S);

  if (j.contains("feeds")) {
    const json& f = j.at("feeds");
    if (f.contains("meal")) {
      c.meal_kg_s = read_map(f.at("meal").at("kg_s"));
      maybe(f.at("meal"), "T_C", &c.meal_T_C);
    }
    if (f.contains("calciner_fuel")) {
      c.calciner_fuel_kg_s = read_map(f.at("calciner_fuel").at("kg_s"));
      maybe(f.at("calciner_fuel"), "T_C", &c.calciner_fuel_T_C);
    }
    if (f.contains("kiln_fuel")) {
      c.kiln_fuel_kg_s = read_map(f.at("kiln_fuel").at("kg_s"));
      maybe(f.at("kiln_fuel"), "T_C", &c.kiln_fuel_T_C);
    }
    if (f.contains("primary_air")) {
      c.primary_air_kg_s = read_map(f.at("primary_air").at("kg_s"));
      maybe(f.at("primary_air"), "T_C", &c.primary_air_T_C);
    }
  }

  if (j.contains("operation")) {
    const json& op = j.at("operation");
    maybe(op, "omega_rpm", &c.omega_rpm);
    maybe(op, "v_grate_m_s", &c.v_grate_m_s);
    maybe(op, "cooler_air_total_m3_s", &c.cooler_air_total_m3_s);
    maybe(op, "P_out_bar", &c.P_out_bar);
    maybe(op, "ambient_T_C", &c.ambient_T_C);
    maybe(op, "ambient_P_bar", &c.ambient_P_bar);
    if (op.contains("cooler_air_split")) {
      const auto& split = op.at("cooler_air_split");
      for (std::size_t i = 0; i < 5 && i < split.size(); ++i)
        c.cooler_air_split[i] = split[i].get<double>();
    }
  }

  if (j.contains("units")) {
    const json& units = j.at("units");
    for (int i = 0; i < 5; ++i) {
      const std::string cy = "cy" + std::to_string(i + 1);
      if (units.contains(cy)) read_cyclone(units.at(cy), &c.plant.cyclones[i]);
      const std::string r = "r" + std::to_string(i + 1);
      if (units.contains(r)) read_duct(units.at(r), &c.plant.risers[i]);
    }
    if (units.contains("ca")) read_duct(units.at("ca"), &c.plant.calciner);
    if (units.contains("kiln")) {
      const json& k = units.at("kiln");
      maybe(k, "L", &c.plant.kiln.dims.L);
      maybe(k, "r_c", &c.plant.kiln.dims.r_c);
      maybe(k, "r_r", &c.plant.kiln.dims.r_r);
      if (k.contains("tilt_deg"))
        c.plant.kiln.dims.tilt = deg_to_rad(k.at("tilt_deg").get<double>());
      maybe_int(k, "n_segments", &c.plant.kiln.dims.n_segments);
      maybe(k, "porosity", &c.plant.kiln.porosity);
      maybe(k, "f0", &c.plant.kiln.f0);
      maybe(k, "beta_gs_factor", &c.plant.kiln.beta_gs_factor);
      if (k.contains("repose_deg"))
        c.plant.kiln.repose_offset = deg_to_rad(k.at("repose_deg").get<double>());
    }
    if (units.contains("cooler")) {
      const json& co = units.at("cooler");
      maybe(co, "L", &c.plant.cooler.dims.L);
      maybe(co, "h", &c.plant.cooler.dims.h);
      maybe(co, "w", &c.plant.cooler.dims.w);
      maybe_int(co, "n_segments", &c.plant.cooler.dims.n_segments);
      maybe(co, "porosity", &c.plant.cooler.porosity);
      maybe(co, "D_p", &c.plant.cooler.D_p);
      maybe(co, "f0", &c.plant.cooler.f0);
      if (co.contains("roof_areas"))
        for (std::size_t i = 0; i < 4; ++i)
          c.plant.cooler.dims.roof_areas[i] =
              co.at("roof_areas")[i].get<double>();
    }
    if (units.contains("false_air_m3s")) {
      const auto& fa = units.at("false_air_m3s");
      for (int u = 0; u < Flowsheet::kNumUnits && u < (int)fa.size(); ++u)
        c.plant.false_air_m3s[u] = fa[u].get<double>();
    }
  }

  if (j.contains("properties")) {
    const json& pr = j.at("properties");
    maybe(pr, "external_film_W_m2K", &c.plant.shared.external_film);
    maybe(pr, "u_mf", &c.plant.shared.u_mf);
    if (pr.contains("d_p_cyclone_um"))
      c.plant.shared.d_p_cyclone = pr.at("d_p_cyclone_um").get<double>() * 1e-6;
    if (pr.contains("emissivity")) {
      const json& e = pr.at("emissivity");
      maybe(e, "solid", &c.plant.shared.eps.solid);
      maybe(e, "refractory", &c.plant.shared.eps.refractory);
      maybe(e, "wall", &c.plant.shared.eps.wall);
      maybe(e, "particle", &c.plant.shared.eps.particle);
      maybe(e, "environment", &c.plant.shared.eps.environment);
    }
    auto lining = [&](const char* key, LiningMaterial* mat) {
      if (!pr.contains(key)) return;
      const json& m = pr.at(key);
      maybe(m, "conductivity", &mat->conductivity);
      maybe(m, "density", &mat->density);
      maybe(m, "specific_heat", &mat->specific_heat);
    };
    lining("refractory", &c.plant.shared.refractory);
    lining("wall", &c.plant.shared.shell);
  }

  if (j.contains("kinetics")) {
    const json& k = j.at("kinetics");
    maybe_str(k, "profile", &c.kinetics_profile);
    if (k.contains("tuning"))
      for (auto it = k.at("tuning").begin(); it != k.at("tuning").end(); ++it)
        c.tuning_overrides[it.key()] = it.value().get<double>();
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    maybe(s, "dt_initial", &c.solver.dt_initial);
    maybe(s, "dt_min", &c.solver.dt_min);
    maybe(s, "dt_max", &c.solver.dt_max);
    maybe(s, "newton_tol", &c.solver.newton_tol);
    maybe_int(s, "max_newton_iters", &c.solver.max_newton_iters);
    maybe(s, "steady_tol", &c.solver.steady_tol);
  }

  if (j.contains("schedule")) {
    c.schedule.clear();
    for (const json& ev : j.at("schedule")) {
      ScenarioEvent e;
      e.t_hours = ev.at("t_h").get<double>();
      if (ev.contains("add_meal_kg_s"))
        e.add_meal_kg_s = read_map(ev.at("add_meal_kg_s"));
      if (ev.contains("set_meal_kg_s"))
        e.set_meal_kg_s = read_map(ev.at("set_meal_kg_s"));
      if (ev.contains("add_calciner_fuel_kg_s"))
        e.add_calciner_fuel_kg_s = read_map(ev.at("add_calciner_fuel_kg_s"));
      if (ev.contains("add_kiln_fuel_kg_s"))
        e.add_kiln_fuel_kg_s = read_map(ev.at("add_kiln_fuel_kg_s"));
      c.schedule.push_back(e);
    }
  }

  if (j.contains("report")) {
    maybe(j.at("report"), "lhv_MJ_kg", &c.report.lhv_MJ_kg);
    maybe(j.at("report"), "interval_s", &c.report.interval_s);
  }
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json_text() const {
  json j;
  j["kinetics_profile"] = kinetics_profile;
  j["emissivity_mode"] = emissivity_mode;
  j["feeds"]["meal"]["kg_s"] = meal_kg_s;
  j["feeds"]["meal"]["T_C"] = meal_T_C;
  j["feeds"]["calciner_fuel"]["kg_s"] = calciner_fuel_kg_s;
  j["feeds"]["kiln_fuel"]["kg_s"] = kiln_fuel_kg_s;
  j["feeds"]["primary_air"]["kg_s"] = primary_air_kg_s;
  j["operation"]["omega_rpm"] = omega_rpm;
  j["operation"]["v_grate_m_s"] = v_grate_m_s;
  j["operation"]["cooler_air_total_m3_s"] = cooler_air_total_m3_s;
  j["operation"]["P_out_bar"] = P_out_bar;
  j["solver"]["dt_max"] = solver.dt_max;
  j["solver"]["newton_tol"] = solver.newton_tol;
  j["solver"]["steady_tol"] = solver.steady_tol;
  json sched = json::array();
  for (const ScenarioEvent& e : schedule) {
    json ev;
    ev["t_h"] = e.t_hours;
    if (!e.add_meal_kg_s.empty()) ev["add_meal_kg_s"] = e.add_meal_kg_s;
    sched.push_back(ev);
  }
  j["schedule"] = sched;
  return j.dump(2);
}

std::string ScenarioConfig::config_hash() const {
  const std::string text = to_json_text();
  // FNV-1a, hex encoded.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

// --- Initial profiles -------------------------------------------------------------

namespace {

struct ProfileSeg {
  double T_m = 300.0;       // mixture / solid temperature
  double T_g = 300.0;       // gas temperature (kiln, cooler)
  double P = 1e5;
  GasVec gas_frac{};        // mole fractions
  SolidVec solid_mass{};    // kg per m3 of segment volume
};

void write_segment(const Flowsheet& fs, int u, int k, const ProfileSeg& ps,
                   Eigen::VectorXd* x) {
  const Layout& layout = fs.layout();
  const UnitKind kind = layout.unit(u).kind;
  SegState s;
  for (std::size_t i = 0; i < kNumSolids; ++i)
    s.C_s[i] = ps.solid_mass[i] / fs.shared.table.species(i).molar_mass;
  const double T_gas = kind == UnitKind::Cyclone || kind == UnitKind::Duct
                           ? ps.T_m
                           : ps.T_g;
  // Gas occupies only the freeboard: the volume closure reads
  // P = c_g R T / (1 - V_hat_bulk), so seed concentrations accordingly.
  double bed_porosity = 0.0;
  if (kind == UnitKind::Kiln) bed_porosity = fs.kiln.porosity;
  if (kind == UnitKind::Cooler) bed_porosity = fs.cooler.porosity;
  const double V_hat_bulk =
      volume_solid(fs.shared.table, s.C_s, bed_porosity);
  const double c_g =
      ps.P * (1.0 - V_hat_bulk) / (kGasConstant * T_gas);
  for (std::size_t i = 0; i < kNumGases; ++i)
    s.C_g[i] = ps.gas_frac[i] * c_g;
  if (kind == UnitKind::Cyclone || kind == UnitKind::Duct) {
    s.U[0] = energy_from_temperature(fs.shared.table, PhaseKind::Mixture,
                                     ps.T_m, s.C_s, s.C_g);
    s.U[1] = fs.shared.refractory.enthalpy_density(
        0.5 * (ps.T_m + fs.shared.T_env));
    s.U[2] = fs.shared.shell.enthalpy_density(
        0.25 * ps.T_m + 0.75 * fs.shared.T_env);
  } else {
    s.U[0] = energy_from_temperature(fs.shared.table, PhaseKind::Solid,
                                     ps.T_m, s.C_s, s.C_g);
    s.U[1] = energy_from_temperature(fs.shared.table, PhaseKind::Gas, ps.T_g,
                                     s.C_s, s.C_g);
    if (kind == UnitKind::Kiln)
      s.U[2] = fs.shared.refractory.enthalpy_density(
          0.5 * (ps.T_m + ps.T_g));
  }
  layout.pack_x(s, u, k, x->data());
}

GasVec flue_fractions() {
  GasVec g{};
  g[idx(Gas::CO2)] = 0.30;
  g[idx(Gas::N2)] = 0.64;
  g[idx(Gas::O2)] = 0.015;
  g[idx(Gas::Ar)] = 0.008;
  g[idx(Gas::H2O)] = 0.037;
  return g;
}

SolidVec meal_suspension(double kg_m3, double calcined) {
  SolidVec m{};
  m[idx(Solid::CaCO3)] = kg_m3 * 0.81 * (1.0 - calcined);
  m[idx(Solid::CaO)] = kg_m3 * 0.45 * calcined;
  m[idx(Solid::SiO2)] = kg_m3 * 0.13;
  m[idx(Solid::Al2O3)] = kg_m3 * 0.04;
  m[idx(Solid::Fe2O3)] = kg_m3 * 0.02;
  return m;
}

}  // namespace

void apply_initial_profile(const Flowsheet& fs, const std::string& kind,
                           Eigen::VectorXd* x) {
  x->setZero(fs.n_x());
  const bool hot = kind == "ignition";
  if (!hot && kind != "ambient")
    throw Error("unknown initial profile: " + kind);

  const GasVec flue = flue_fractions();
  const GasVec air = fs.shared.ambient_mole_frac;
  const double T_env = fs.shared.T_env;

  // Preheater string along the gas path (cy1 coldest).
  const double T_tower[10] = {550, 600, 700, 750, 850, 900, 1000, 1040, 1100,
                              1140};
  // Start isobaric: Darcy velocities are steeply nonlinear in the face
  // pressure difference, so flows are left to develop during the
  // pseudo-transient continuation instead of being guessed.
  const double P0 = fs.boundary.P_out;
  // Unit order along the gas path: cy1, r1, cy2, r2, cy3, r3, cy4, r4, cy5.
  const int path_units[9] = {Flowsheet::kCy1, Flowsheet::kR1,
                             Flowsheet::kCy1 + 1, Flowsheet::kR1 + 1,
                             Flowsheet::kCy1 + 2, Flowsheet::kR1 + 2,
                             Flowsheet::kCy1 + 3, Flowsheet::kR1 + 3,
                             Flowsheet::kCy1 + 4};
  for (int pu = 0; pu < 9; ++pu) {
    const int u = path_units[pu];
    const int n = fs.layout().unit(u).n_segments;
    for (int k = 0; k < n; ++k) {
      ProfileSeg ps;
      ps.T_m = hot ? T_tower[pu] : T_env;
      ps.P = P0;
      ps.gas_frac = hot ? flue : air;
      const double calcined = pu < 5 ? 0.05 : 0.5;
      ps.solid_mass = meal_suspension(hot ? 0.8 : 0.1, hot ? calcined : 0.0);
      write_segment(fs, u, k, ps, x);
    }
  }
  // Calciner: hottest part of the tower.
  for (int k = 0; k < fs.calciner.dims.n_segments; ++k) {
    ProfileSeg ps;
    ps.T_m = hot ? 1150.0 : T_env;
    ps.P = P0;
    ps.gas_frac = hot ? flue : air;
    ps.solid_mass = meal_suspension(hot ? 0.9 : 0.1, hot ? 0.8 : 0.0);
    write_segment(fs, Flowsheet::kCa, k, ps, x);
  }
  // Tertiary air duct: clean hot air.
  for (int k = 0; k < fs.risers[4].dims.n_segments; ++k) {
    ProfileSeg ps;
    ps.T_m = hot ? 1100.0 : T_env;
    ps.P = P0;
    ps.gas_frac = air;
    write_segment(fs, Flowsheet::kR1 + 4, k, ps, x);
  }
  // Kiln: bed heats towards the burner end, gas peaks there.
  {
    const int n = fs.kiln.dims.n_segments;
    for (int k = 0; k < n; ++k) {
      const double w = n > 1 ? static_cast<double>(k) / (n - 1) : 0.0;
      ProfileSeg ps;
      ps.T_m = hot ? 1150.0 + w * 580.0 : T_env;
      ps.T_g = hot ? 1500.0 + w * 900.0 : T_env;
      ps.P = P0;
      ps.gas_frac = hot ? flue : air;
      // Bed: raw oxides convert towards clinker phases along the kiln.
      const double bed_kg_m3 = hot ? 38.0 : 1.0;
      ps.solid_mass[idx(Solid::CaO)] = bed_kg_m3 * (0.60 - 0.55 * w);
      ps.solid_mass[idx(Solid::SiO2)] = bed_kg_m3 * 0.02 * (1.0 - w);
      ps.solid_mass[idx(Solid::C2S)] = bed_kg_m3 * (0.25 - 0.20 * w);
      ps.solid_mass[idx(Solid::C3S)] = bed_kg_m3 * (0.05 + 0.70 * w);
      ps.solid_mass[idx(Solid::C3A)] = bed_kg_m3 * (0.04 + 0.04 * w);
      ps.solid_mass[idx(Solid::C4AF)] = bed_kg_m3 * (0.04 + 0.05 * w);
      write_segment(fs, Flowsheet::kKiln, k, ps, x);
    }
  }
  // Cooler: clinker bed cooling along the grate, air warms through it.
  {
    const int n = fs.cooler.dims.n_segments;
    for (int k = 0; k < n; ++k) {
      const double w = n > 1 ? static_cast<double>(k) / (n - 1) : 0.0;
      ProfileSeg ps;
      ps.T_m = hot ? 1650.0 * std::pow(0.45 / 1.65, w) + 120.0 : T_env;
      ps.T_g = hot ? std::max(900.0 * (1.0 - w), 330.0) : T_env;
      ps.P = P0;
      ps.gas_frac = air;
      const double bed_kg_m3 = hot ? 150.0 : 1.0;
      ps.solid_mass[idx(Solid::CaO)] = bed_kg_m3 * 0.02;
      ps.solid_mass[idx(Solid::C2S)] = bed_kg_m3 * 0.02;
      ps.solid_mass[idx(Solid::C3S)] = bed_kg_m3 * 0.76;
      ps.solid_mass[idx(Solid::C3A)] = bed_kg_m3 * 0.10;
      ps.solid_mass[idx(Solid::C4AF)] = bed_kg_m3 * 0.10;
      write_segment(fs, Flowsheet::kCooler, k, ps, x);
    }
  }
}

}  // namespace pyro
