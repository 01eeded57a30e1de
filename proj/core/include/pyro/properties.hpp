#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pyro/compounds.hpp"
#include "pyro/species.hpp"

namespace pyro {

// Thermo-physical property evaluation. All functions are pure; amounts may be
// extensive moles, concentrations [mol/m3] or fluxes [mol/(m2 s)] -- every
// model here is homogeneous of degree 1 in the amount vector, so the result
// carries the corresponding basis (J, J/m3, W/m2, ...). Negative amounts from
// solver probing are clamped to zero.

enum class PhaseKind { Solid, Gas, Mixture, Refractory, Wall };

// Linear model for the refractory / steel shell phases (not in the compound
// tables): volumetric enthalpy rho*cp*(T - 298.15 K).
struct LiningMaterial {
  double conductivity = 0.0;   // W/(K m)
  double density = 0.0;        // kg/m3
  double specific_heat = 0.0;  // J/(kg K)

  double volumetric_heat_capacity() const { return density * specific_heat; }
  double enthalpy_density(double T) const;      // J/m3
  double temperature(double U_hat) const;       // inverse of the above
};

// Molar heat capacity [J/(mol K)] of one species.
double cp_molar(const CompoundTable& table, std::size_t flat_index, double T);

// Phase heat capacity  sum n_i cp_i(T); basis follows n.
double heat_capacity(const CompoundTable& table, double T,
                     std::span<const double> n, bool gas_phase);

// Total enthalpy sum n_i (dHf_i + int_{T0}^{T} cp_i); pressure-independent
// (ideal gas). Solid basis uses solid species, gas basis gas species.
double enthalpy_solid(const CompoundTable& table, double T,
                      const SolidVec& n);
double enthalpy_gas(const CompoundTable& table, double T, const GasVec& n);

// Phase volume: solids sum n_i M_i / rho_i (optionally expanded to bulk by
// 1/(1-porosity)); gas ideal sum n_i R T / P. Basis follows n.
double volume_solid(const CompoundTable& table, const SolidVec& n,
                    double bed_porosity = 0.0);
double volume_gas(double T, double P, const GasVec& n);

struct Densities {
  double particle = 0.0;  // kg per m3 of particle volume
  double segment = 0.0;   // kg per m3 of segment volume
  double bulk = 0.0;      // (1 - porosity) * particle
};

// V_hat is the phase volume density (phase volume per segment volume).
Densities densities(const CompoundTable& table, std::span<const double> C,
                    bool gas_phase, double V_hat, double porosity);

// Pure-gas Sutherland viscosity [Pa s]; throws for species without anchors.
double pure_gas_viscosity(const CompoundTable& table, Gas species, double T);

// Wilke mixture viscosity over gas concentrations (Csus excluded) [Pa s].
double gas_viscosity(const CompoundTable& table, double T, const GasVec& C_g);

// Extended Einstein suspension correction; V_hat_s in [0, 0.5).
double mixture_viscosity(const CompoundTable& table, double T,
                         const GasVec& C_g, double V_hat_s);

// Per-species gas conductivity: linear in T through the two table anchors.
double pure_gas_conductivity(const CompoundTable& table, Gas species,
                             double T);

// Mason-Saxena gas mixture conductivity (Csus excluded) [W/(K m)].
double gas_conductivity(const CompoundTable& table, double T,
                        const GasVec& C_g);

// Serial (layered) conductivity of a solid mixture.
double solid_conductivity(const CompoundTable& table, const SolidVec& C_s);

// Cooler bulk variant: 1/k = porosity/k_g + (1-porosity) sum (V_i/V_s)/k_i.
double bulk_conductivity_with_gas(const CompoundTable& table,
                                  const SolidVec& C_s, double k_gas,
                                  double porosity);

// Suspension mixture: 1/k_m = V_hat_g/k_g + sum V_hat_{s,i}/k_{s,i}.
double suspension_conductivity(const CompoundTable& table, double T,
                               const SolidVec& C_s, const GasVec& C_g);

// --- Gas emissivity -------------------------------------------------------

struct WsggCoefficients {
  // k_j = K1[j] + K2[j] * (xH2O/xCO2); j in [0,4) for the 4 grey gases.
  std::array<double, 4> K1{}, K2{};
  // c_{j,i} = C1[j][i] + C2[j][i]*MR + C3[j][i]*MR^2, i in [0,3).
  std::array<std::array<double, 3>, 4> C1{}, C2{}, C3{};

  static WsggCoefficients load(const std::string& path);
};

struct EmissivityModel {
  enum class Mode { Constant, Wsgg };
  Mode mode = Mode::Constant;
  double constant_eps_g = 0.30;
  std::optional<WsggCoefficients> wsgg;
};

struct GasRadiation {
  double eps_g = 0.0;    // gas emissivity
  double alpha_g = 0.0;  // gas absorptivity
};

// Gas emissivity at T, and absorptivity eps_g(T_s)*P_m*S_m*sqrt(T_s/T_g)
// with P_m the CO2+H2O partial pressure [bar] and S_m the mean path [m].
// WSGG mode requires x_CO2 > 0; otherwise it falls back to constant mode
// with a warning.
GasRadiation gas_emissivity(const EmissivityModel& model, double T_g,
                            double T_s, double P, const GasVec& C_g,
                            double S_m);

// Mixture emissivity with grey overlap: eps_s + eps_g - eps_s*eps_g.
double mixture_emissivity(double eps_s, double eps_g);

// --- Energy <-> temperature -----------------------------------------------

// Internal-energy density at temperature T for the given phase content:
//   solid/refractory/wall: U = H_hat;  gas: U = H_hat - c_g R T;
//   mixture: U = H_s + H_g - c_g R T (single shared temperature).
// Concentration bases; lining phases use LiningMaterial instead.
double energy_from_temperature(const CompoundTable& table, PhaseKind kind,
                               double T, const SolidVec& C_s,
                               const GasVec& C_g);

// Inverse map; Newton with bisection fallback on [150, 3500] K. Throws when
// no bracket exists (nonphysical state). |residual| < 1e-8 |U| + 1e-6.
double temperature_from_energy(const CompoundTable& table, PhaseKind kind,
                               double U_hat, const SolidVec& C_s,
                               const GasVec& C_g,
                               double T_guess = 800.0);

}  // namespace pyro
