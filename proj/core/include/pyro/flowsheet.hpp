#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pyro/constants.hpp"
#include "pyro/state.hpp"
#include "pyro/units.hpp"

namespace pyro {

// Manipulated variables and feed streams of the plant.
struct BoundarySpec {
  double P_out = 0.9452e5;  // fan-induced pressure above cyclone 1 [Pa]
  MolarFeed meal;           // raw meal entering riser 1
  MolarFeed calciner_fuel;
  MolarFeed kiln_fuel;
  MolarFeed primary_air;
  double omega = rpm_to_rad_s(4.0);  // kiln rotation [rad/s]
  double v_grate = 0.017;            // cooler grate speed [m/s]
  std::vector<MolarFeed> fan_feeds;  // cooling air per cooler segment
};

// System-boundary molar and enthalpy flows recorded during one evaluation.
struct BoundaryFlows {
  struct Entry {
    std::string name;
    SolidVec solids{};  // mol/s
    GasVec gases{};
    double H = 0.0;  // W
  };
  std::vector<Entry> in, out;
  double Q_env = 0.0;  // W lost through walls

  std::array<double, kNumElements> element_in() const;
  std::array<double, kNumElements> element_out() const;
  double enthalpy_in() const;
  double enthalpy_out() const;
};

// Per-unit boundary mass flows [kg/s] for the CSV output.
struct PortMass {
  double solids_in = 0.0, gas_in = 0.0;
  double solids_out = 0.0, gas_out = 0.0;
};

struct EvalReport {
  BoundaryFlows flows;
  std::vector<UnitDiag> unit_diag;
  std::vector<PortMass> port_mass;
};

struct ElementAudit {
  // mol/s of each element: inflow, outflow, accumulation (sum V dC/dt).
  std::array<double, kNumElements> in{}, out{}, accumulation{};
  std::array<double, kNumElements> imbalance{};          // in - out - acc
  std::array<double, kNumElements> relative_imbalance{}; // vs max(in, out)
  double energy_in = 0.0, energy_out = 0.0, energy_env = 0.0;
  double energy_accumulation = 0.0;
  double energy_imbalance = 0.0;
};

// The wired plant: Cy1..Cy5, R1..R5, Ca, kiln, cooler.
class Flowsheet {
 public:
  static constexpr int kCy1 = 0;  // cyclone indices kCy1 + i
  static constexpr int kR1 = 5;   // riser indices kR1 + i
  static constexpr int kCa = 10;
  static constexpr int kKiln = 11;
  static constexpr int kCooler = 12;
  static constexpr int kNumUnits = 13;

  PlantShared shared;
  BoundarySpec boundary;
  std::array<CycloneUnit, 5> cyclones;
  std::array<DuctUnit, 5> risers;
  DuctUnit calciner;
  KilnUnit kiln;
  CoolerUnit cooler;
  std::array<double, kNumUnits> false_air_m3s{};

  // Builds geometry caches, the layout and the sparsity pattern. Call after
  // configuring the members above.
  void finalize();

  const Layout& layout() const { return layout_; }
  int n_x() const { return layout_.n_x(); }
  int n_z() const { return layout_.n_z(); }

  // Global residual: xdot = f(x, z) and algebraic rows g(x, z). Pure and
  // deterministic; throws naming (unit, segment, field) on NaN.
  void eval(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
            Eigen::VectorXd* f, Eigen::VectorXd* g,
            EvalReport* report = nullptr) const;

  // Conservation audit at a state; xdot supplies the accumulation terms
  // (pass the f from eval for a transient state, or nullptr at steady state).
  ElementAudit element_balance_audit(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& z) const;

  // Conservative structural sparsity as (row block, col block) pairs over
  // the (unit, segment) blocks.
  const std::vector<std::pair<int, int>>& block_pattern() const {
    return block_pattern_;
  }
  // Column groups for finite-difference seeding derived from the pattern.
  const std::vector<std::vector<int>>& coloring_groups() const {
    return color_groups_;
  }

  // Ambient air as mole fractions (false air, fans).
  GasVec ambient_molar(double mol_per_s) const;

  // Consistent algebraic state: solves g(x, z) = 0 segment by segment.
  Eigen::VectorXd consistent_z(const Eigen::VectorXd& x) const;

  // Total false air into one unit [mol/s] split over ambient composition.
  MolarFeed false_air_feed(int unit) const;

 private:
  struct Ports;
  void compute_ports(const std::vector<std::vector<SegState>>& segs,
                     Ports* ports) const;
  void build_sparsity();

  Layout layout_;
  std::vector<std::pair<int, int>> block_pattern_;
  std::vector<std::vector<int>> color_groups_;
};

}  // namespace pyro
