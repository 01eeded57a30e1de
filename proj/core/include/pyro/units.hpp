#pragma once

#include <optional>
#include <vector>

#include "pyro/constants.hpp"
#include "pyro/compounds.hpp"
#include "pyro/geometry.hpp"
#include "pyro/heat_transfer.hpp"
#include "pyro/kinetics.hpp"
#include "pyro/properties.hpp"
#include "pyro/state.hpp"
#include "pyro/transport.hpp"

namespace pyro {

// Everything the unit models share: property tables, kinetics, radiation
// settings, lining materials and the ambient.
struct PlantShared {
  CompoundTable table;
  ReactionSet reactions;
  EmissivityModel emissivity_model;
  EmissivitySet eps;
  LiningMaterial refractory{2.0, 2600.0, 960.0};
  LiningMaterial shell{45.0, 7850.0, 490.0};
  double external_film = 10.0;  // W/(m2 K), natural convection outside
  double T_env = 298.15;
  double P_env = 1.0e5;
  GasVec ambient_mole_frac{};  // N2/O2/Ar/H2O make up false air and fan air
  double u_mf = 0.16;          // minimum fluidization velocity (cyclone Nu)
  double d_p_cyclone = 20e-6;  // particle diameter in the cyclone Nu
};

// Boundary source injected into one segment: molar flows [mol/s] at T.
struct MolarFeed {
  SolidVec solids{};
  GasVec gases{};
  double T = 298.15;

  double mass_flow(const CompoundTable& table) const;  // kg/s
  bool empty() const;
};

// Per-segment time derivative of the differential state.
struct SegDeriv {
  SolidVec dC_s{};
  GasVec dC_g{};
  std::array<double, kMaxPhases> dU{};
};

// Evaluation bookkeeping used by the audits and reports.
struct UnitDiag {
  double Q_env = 0.0;  // W to the environment (convective + radiative)
  // Cyclone separation bookkeeping [kg/s].
  double solids_in_mass = 0.0;
  double saltation_mass = 0.0;
  double separation_mass = 0.0;
  double eta_total = 0.0;
};

// --- Cyclone -----------------------------------------------------------------

class CycloneUnit {
 public:
  CycloneDims dims;
  CycloneGeometry geom;
  CycloneTuning tune;
  double f0 = 500.0;

  void init() { geom = cyclone_geometry(dims); }

  // Gas-dust stream out of the vortex finder (per m2 of A_x).
  Stream top_outlet(const PlantShared& sh, const SegState& s,
                    double P_down) const;

  // Separated solids through the dust outlet (per m2 of A_d); combines
  // saltation, vortex separation and the fall-through pass-through.
  Stream bottom_outlet(const PlantShared& sh, const SegState& s,
                       const Stream& inlet, const Stream& eye,
                       double P_down) const;

  void residuals(const PlantShared& sh, const SegState& s, const Stream& inlet,
                 const Stream& eye, double P_down, SegDeriv* dx, double* g,
                 UnitDiag* diag) const;

 private:
  struct Eval;
  Eval evaluate(const PlantShared& sh, const SegState& s, const Stream& inlet,
                double P_down) const;
};

// --- Riser / calciner ----------------------------------------------------------

class DuctUnit {
 public:
  DuctDims dims;
  std::vector<DuctSegmentGeometry> seg;
  double f0 = 60.0;
  double p_fall = 0.0;  // fall-through fraction of the solid influx

  void init();

  Stream top_outlet(const PlantShared& sh, const std::vector<SegState>& s,
                    double P_down) const;

  // Solids lost down the vortex eye of the cyclone below (per m2 of the
  // duct inlet), at the bottom-segment mixture temperature.
  Stream fall_outlet(const PlantShared& sh, const std::vector<SegState>& s,
                     const Stream& inlet) const;

  void residuals(const PlantShared& sh, const std::vector<SegState>& s,
                 const Stream& inlet, const std::vector<MolarFeed>& fuel,
                 double P_down, std::vector<SegDeriv>* dx, double* g,
                 UnitDiag* diag) const;

  double inlet_area() const { return duct_inlet_area(dims); }
  double outlet_area() const { return duct_outlet_area(dims); }
};

// --- Rotary kiln -----------------------------------------------------------------

class KilnUnit {
 public:
  KilnDims dims;
  double porosity = 8.0 / 9.0;
  double f0 = 2.0;
  double beta_gs_factor = 3.0;
  double repose_slope = 0.0;          // a_omega [rad per rad/s]
  double repose_offset = deg_to_rad(36.0);  // b_omega

  // Counter-flow: solids enter segment 0 and advect +z; gas enters segment
  // n-1 (burner end) and advects -z.
  Stream gas_outlet(const PlantShared& sh, const std::vector<SegState>& s,
                    double P_down) const;
  Stream solids_outlet(const PlantShared& sh, const std::vector<SegState>& s,
                       double omega) const;

  void residuals(const PlantShared& sh, const std::vector<SegState>& s,
                 const Stream& solids_in, const Stream& gas_in,
                 const std::vector<MolarFeed>& burner, double P_down_gas,
                 double omega, std::vector<SegDeriv>* dx, double* g,
                 UnitDiag* diag) const;

  double end_area() const { return dims.cross_area(); }
  double bulk_volume_fraction(const PlantShared& sh, const SegState& s) const;
};

// --- Grate cooler -----------------------------------------------------------------

class CoolerUnit {
 public:
  CoolerDims dims;
  CoolerGeometry geom;
  double porosity = 0.4;
  double D_p = 0.04;  // clinker particle diameter [m]
  double f0 = 100.0;

  void init() { geom = cooler_geometry(dims); }

  struct RoofStreams {
    Stream to_kiln;  // per m2 of roof part 1 (secondary air)
    Stream to_r5;    // per m2 of roof part 2 (tertiary air)
    Stream to_env;   // per m2 of roof part 4
  };

  RoofStreams roof_outlets(const PlantShared& sh,
                           const std::vector<SegState>& s, double P_kiln,
                           double P_r5) const;
  Stream solids_outlet(const PlantShared& sh, const std::vector<SegState>& s,
                       double v_grate) const;

  void residuals(const PlantShared& sh, const std::vector<SegState>& s,
                 const Stream& solids_in, const std::vector<MolarFeed>& fans,
                 double P_kiln, double P_r5, double v_grate,
                 std::vector<SegDeriv>* dx, double* g, UnitDiag* diag) const;

  double roof_part_area(int p) const { return dims.roof_areas[p]; }

 private:
  // Per-segment roof velocity against the area-mixed boundary pressure.
  std::vector<double> roof_velocities(const PlantShared& sh,
                                      const std::vector<SegState>& s,
                                      double P_kiln, double P_r5) const;
};

}  // namespace pyro
