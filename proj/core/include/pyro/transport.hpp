#pragma once

#include "pyro/compounds.hpp"
#include "pyro/geometry.hpp"
#include "pyro/species.hpp"

namespace pyro {

// Turbulent Darcy-Weisbach velocity with the Blasius friction factor and the
// empirical correction f0:
//   v = (2/(0.316 f0) (D_H^5/(mu rho^3))^(1/4) |dP|/dl)^(4/7) sgn(-dP/dl).
double darcy_velocity(double dP, double dl, double D_H, double rho, double mu,
                      double f0);

// Saeman bed transport velocity in the kiln.
//   v = omega (tilt + phi cos xi)/sin xi * pi L_c / asin(L_c/(2 r_c)).
double saeman_velocity(double omega, double theta, double phi, double r_c,
                       double tilt, double repose_xi);

// First-order upwind advective flux plus Fickian diffusion over one face.
double upwind_flux(double v, double C_up, double C_down, double D,
                   double dC_per_dl);

// Fuller binary diffusion coefficient [m2/s]; T in K, P in Pa internally
// (converted to the correlation's bar/g-mol/cm3 units).
double fuller_binary(const CompoundTable& table, Gas i, Gas j, double T,
                     double P);

// Blanc's law mixture diffusivity per species [m2/s]; zero for a
// single-species gas (no diffusion partner).
GasVec fuller_diffusion(const CompoundTable& table, double T, double P,
                        const GasVec& C_g);

struct CycloneTuning {
  double f_c = 1.0;    // loading-limit correction
  double f_N = 1.0;    // outlet solid velocity fraction
  double d_m = 20e-6;  // median particle diameter [m]
};

struct CycloneInletState {
  double v_in = 0.0;          // inlet velocity [m/s]
  SolidVec C_s{};             // inlet solid concentrations [mol/m3]
  GasVec C_g{};               // inlet gas concentrations
  double mu_m = 0.0;          // suspension viscosity at inlet conditions
};

struct CycloneChamberState {
  double rho_s_particle = 0.0;  // particle density of chamber solids [kg/m3]
  double rho_g = 0.0;           // chamber gas segment density
  double v_gx = 0.0;            // gas outlet velocity (Darcy over h_x)
};

struct CycloneSeparation {
  double eta_sal = 0.0;   // saltation efficiency
  double v_sep = 0.0;     // radial separation velocity at r_eq [m/s]
  double v_sx = 0.0;      // solids outlet velocity f_N v_gx
  double d_star = 0.0;    // cut size [m]
  double c_0 = 0.0;       // inlet load ratio
  double c_0L = 0.0;      // loading limit
  double v_theta_w = 0.0; // wall tangential velocity
};

// Muschelknautz / Mothes-Loeffler separation chain.
CycloneSeparation cyclone_separation(const CycloneInletState& inlet,
                                     const CycloneChamberState& chamber,
                                     const CycloneDims& dims,
                                     const CycloneGeometry& geom,
                                     const CycloneTuning& tuning,
                                     const CompoundTable& table);

// Upwind enthalpy flux for a molar flux vector [W/m2]; gas and solid parts
// evaluated at the upwind temperature.
double enthalpy_flux_solid(const CompoundTable& table, double T_up,
                           const SolidVec& N);
double enthalpy_flux_gas(const CompoundTable& table, double T_up,
                         const GasVec& N);

// Fourier conduction flux -k dT/dl [W/m2].
double conduction_flux(double k, double dT_per_dl);

}  // namespace pyro
