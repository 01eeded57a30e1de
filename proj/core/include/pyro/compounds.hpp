#pragma once

#include <array>
#include <optional>
#include <string>

#include "pyro/species.hpp"

namespace pyro {

// Heat-capacity polynomial c_p(T) = C0 + C1 T + C2 T^2 + Cm2 T^-2 + Cmh T^-1/2,
// coefficients in SI (J, mol, K). Below kCpClampT the polynomial is clamped to
// its value at kCpClampT so the energy map stays monotone at extreme iterates.
struct CpPolynomial {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double cm2 = 0.0;
  double cmh = 0.0;
  double valid_min = 0.0;  // stated validity range [K]; evaluation extrapolates
  double valid_max = 0.0;

  double value(double T) const;
  // Integral of value() from kReferenceT to T (analytic, honoring the clamp).
  double integral_from_ref(double T) const;
};

inline constexpr double kCpClampT = 200.0;

// Two-point anchor (T, value) pairs for gas transport properties.
struct Anchor {
  double T = 0.0;
  double value = 0.0;
};

struct CompoundRecord {
  std::string name;
  bool is_gas = false;
  double molar_mass = 0.0;         // kg/mol
  double formation_enthalpy = 0.0; // J/mol at (298.15 K, 1 bar)
  CpPolynomial cp;

  // Solids
  double solid_density = 0.0;      // kg/m3
  double solid_conductivity = 0.0; // W/(K m)

  // Gases; anchors empty where the table has none (Csus).
  std::optional<Anchor> k_anchor_lo, k_anchor_hi;   // W/(K m)
  std::optional<Anchor> mu_anchor_lo, mu_anchor_hi; // Pa s
  double diffusion_volume = 0.0;                    // cm3 (Fuller)

  // Derived at load: Sutherland parameters (mu0 at T0 with constant S).
  double sutherland_mu0 = 0.0;
  double sutherland_T0 = 0.0;
  double sutherland_S = 0.0;
  bool has_viscosity = false;
  bool has_conductivity = false;
};

class CompoundTable {
 public:
  // Built-in table with the reference data set; h2o_sutherland_S is the
  // constant used for the single-anchor H2O fit.
  static CompoundTable builtin(double h2o_sutherland_S = 961.0);

  // Reads the documented CSV format (one record per species, fixed order).
  static CompoundTable load(const std::string& path,
                            double h2o_sutherland_S = 961.0);
  void save(const std::string& path) const;

  const CompoundRecord& solid(Solid s) const { return records_[flat(s)]; }
  const CompoundRecord& gas(Gas g) const { return records_[flat(g)]; }
  const CompoundRecord& species(std::size_t flat_index) const {
    return records_[flat_index];
  }

  double molar_mass(std::size_t flat_index) const {
    return records_[flat_index].molar_mass;
  }

 private:
  // Validation: positivity of cp on a [200, 2600] K grid, positive molar
  // masses and densities, zero formation enthalpy for reference-state
  // elements; throws on violation. Also calibrates Sutherland constants.
  void finalize(double h2o_sutherland_S);

  std::array<CompoundRecord, kNumSpecies> records_;
};

}  // namespace pyro
