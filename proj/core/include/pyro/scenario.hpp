#pragma once

#include <map>
#include <memory>
#include <string>

#include "pyro/flowsheet.hpp"
#include "pyro/solver.hpp"

namespace pyro {

// One scheduled boundary-condition change. Feed patches are given in kg/s
// per species name; "Metakaolin" expands to SiO2 + Al2O3 by mass.
struct ScenarioEvent {
  double t_hours = 0.0;
  std::map<std::string, double> add_meal_kg_s;
  std::map<std::string, double> set_meal_kg_s;
  std::map<std::string, double> add_calciner_fuel_kg_s;
  std::map<std::string, double> add_kiln_fuel_kg_s;
};

struct ReportSettings {
  double lhv_MJ_kg = 27.9;     // fuel lower heating value for the report
  double interval_s = 60.0;    // CSV reporting interval
};

// Full scenario: plant configuration, boundary conditions, kinetics profile,
// solver settings and the event schedule. Defaults reproduce the reference
// plant; load() applies JSON overrides on top and validates.
struct ScenarioConfig {
  std::string kinetics_profile = "default";
  std::string compounds_file;   // optional overrides of the built-in tables
  std::string reactions_file;
  std::string wsgg_file;
  std::string emissivity_mode = "constant";
  std::map<std::string, double> tuning_overrides;  // r1..r12 -> scale
  double constant_eps_g = 0.30;
  double h2o_sutherland_S = 961.0;

  // Feed streams in kg/s by species name (Metakaolin allowed in meal).
  std::map<std::string, double> meal_kg_s;
  double meal_T_C = 60.0;
  std::map<std::string, double> calciner_fuel_kg_s;
  double calciner_fuel_T_C = 63.9;
  std::map<std::string, double> kiln_fuel_kg_s;
  double kiln_fuel_T_C = 43.8;
  std::map<std::string, double> primary_air_kg_s;
  double primary_air_T_C = 43.8;

  double omega_rpm = 4.0;
  double v_grate_m_s = 0.017;
  double cooler_air_total_m3_s = 157.9;
  std::array<double, 5> cooler_air_split = {28.0, 27.0, 27.0, 27.0, 27.0};
  double P_out_bar = 0.9452;
  double ambient_T_C = 25.0;
  double ambient_P_bar = 1.0;

  // Dimensions, tuning factors and false air are stored pre-assembled in the
  // flowsheet template below; JSON may override individual fields.
  Flowsheet plant;

  SolverConfig solver;
  std::vector<ScenarioEvent> schedule;
  ReportSettings report;

  static ScenarioConfig defaults();
  static ScenarioConfig load(const std::string& path);
  // Parses a JSON document body (used by load and the tests).
  static ScenarioConfig from_json_text(const std::string& text);

  // Builds the runnable flowsheet: compound/reaction tables, boundary
  // feeds in molar units, false air, fans.
  std::shared_ptr<Flowsheet> build() const;

  // Expands a name->kg/s map into a molar feed at T.
  MolarFeed make_feed(const CompoundTable& table,
                      const std::map<std::string, double>& kg_s,
                      double T_C) const;

  std::vector<ScheduledEvent> make_schedule(
      const std::shared_ptr<Flowsheet>& fs) const;

  // Stable hash of the scenario for the run manifest.
  std::string config_hash() const;
  std::string to_json_text() const;
};

// Initial profiles for the steady-state search. "ignition" seeds a lit
// plant (hot burner zone); "ambient" is everything at environmental
// conditions, which converges to the unlit branch.
void apply_initial_profile(const Flowsheet& fs, const std::string& kind,
                           Eigen::VectorXd* x);

}  // namespace pyro
