#pragma once

#include <vector>

#include "pyro/compounds.hpp"
#include "pyro/properties.hpp"

namespace pyro {

// --- Series conductances ------------------------------------------------------

struct ConductanceLeg {
  enum class Kind { Film, Barrier };
  Kind kind = Kind::Film;
  double A = 0.0;     // contact area [m2]
  double beta = 0.0;  // film coefficient [W/(m2 K)]
  double dx = 0.0;    // barrier depth [m]
  double k = 0.0;     // barrier conductivity [W/(m K)]

  static ConductanceLeg film(double A, double beta) {
    return {Kind::Film, A, beta, 0.0, 0.0};
  }
  static ConductanceLeg barrier(double A, double dx, double k) {
    return {Kind::Barrier, A, 0.0, dx, k};
  }
};

// Total A*beta of legs in series [W/K].
double conductance_series(const std::vector<ConductanceLeg>& legs);

// Depth of a curved wall between radii (inner, outer): ln(r_o/r_i) r_i.
double curved_depth(double r_inner, double r_outer);

// --- Emissivities ---------------------------------------------------------------

struct EmissivitySet {
  double solid = 0.9;
  double refractory = 0.85;
  double wall = 0.8;
  double particle = 0.9;     // defaults to the solid bulk value
  double environment = 0.8;  // matches the wall so ambient equilibrium is net-zero
};

// --- Convective correlations -----------------------------------------------------

// Gupta cyclone Nusselt number and the mixture film coefficient.
struct CycloneBetaInput {
  double v_in = 0.0;        // inlet velocity [m/s]
  double u_mf = 0.16;       // minimum fluidization velocity [m/s]
  double d_p = 20e-6;       // particle diameter [m]
  double dP_c = 0.0;        // pressure drop across the cyclone [Pa], >= 0
  double rho_g = 0.0;       // gas segment density [kg/m3]
  double rho_s = 0.0;       // solids segment density [kg/m3]
  double c_g = 0.0;         // gas volumetric heat capacity [J/(m3 K)]
  double c_s = 0.0;         // solids volumetric heat capacity [J/(m3 K)]
  double k_g = 0.0;         // gas conductivity [W/(m K)]
  double k_s = 0.0;         // solids serial conductivity (0 when no solids)
  double k_m = 0.0;         // suspension conductivity
  double mu_g = 0.0;        // gas viscosity [Pa s]
  double r_c = 0.0;         // chamber radius
  double D_H = 0.0;         // hydraulic diameter 4 V / A_cy
};

double beta_cyclone(const CycloneBetaInput& in);

// Gnielinski duct correlation; throws for Re_D <= 1000, warns below 3000.
double beta_duct(double Re_D, double Pr, double k_m, double D_H);

// Tscheng kiln correlations.
struct KilnBetaInput {
  double theta = 0.0;   // fill angle [rad]
  double r_c = 0.0;
  double omega = 0.0;   // rotation [rad/s]
  double v_g = 0.0;     // gas axial speed [m/s]
  double rho_g = 0.0;
  double mu_g = 0.0;
  double k_g = 0.0;
  double k_s = 0.0;             // bed serial conductivity
  double c_s_volumetric = 0.0;  // bed volumetric heat capacity [J/(m3 K)]
  double beta_gs_factor = 1.0;  // scenario correction on beta_gs
};

struct KilnBetas {
  double gs = 0.0;
  double gr = 0.0;
  double rs = 0.0;
  double D_e = 0.0;
};

KilnBetas betas_kiln(const KilnBetaInput& in);

// Packed-bed film coefficient for the cooler; Nu = 2 + 1.8 Pr^(1/3) Re^(1/2).
double beta_cooler(double Re, double Pr, double k_s, double D_p);

// --- Radiation ---------------------------------------------------------------------

// General two-way grey pair: A sigma (eps_i T_i^4 - eps_j T_j^4).
double radiation_pair(double A, double eps_i, double T_i, double eps_j,
                      double T_j);

// Cyclone chamber <-> refractory with the particle view factor
// F = 1/(1/eps_p + 1/eps_r - 1) over A_cs = A_c V_hat_s.
double radiation_cyclone(double A_c, double V_hat_s, double eps_p,
                         double eps_r, double T_m, double T_r);

struct KilnRadiationInput {
  double A_gs = 0.0, A_gw = 0.0, A_ws = 0.0;
  double eps_s = 0.9, eps_w = 0.85;
  double eps_g = 0.0;
  double alpha_gs = 0.0;  // gas absorptivity evaluated at the bed surface
  double alpha_gw = 0.0;  // and at the refractory surface
  double T_g = 0.0, T_s = 0.0, T_w = 0.0;
  double L_c = 0.0, r_c = 0.0, tilt = 0.0;
};

struct KilnRadiation {
  double gs = 0.0;  // gas -> solid [W]
  double gw = 0.0;  // gas -> refractory
  double ws = 0.0;  // refractory -> solid
};

KilnRadiation radiation_kiln(const KilnRadiationInput& in);

// Mean beam lengths.
double path_length_kiln(double r_c, double bed_height);     // 0.95 (2 r_c - h)
double path_length_cooler(double bed_height);               // h / 2
double path_length_duct(double A_c_cross);                  // sqrt(A/pi)

}  // namespace pyro
