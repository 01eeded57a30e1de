#pragma once

#include <array>
#include <string>
#include <vector>

#include "pyro/compounds.hpp"
#include "pyro/species.hpp"

namespace pyro {

inline constexpr std::size_t kNumReactions = 12;

// Modified Arrhenius law r = scale * k_r T^n exp(-E_A/RT) prod P_l^beta_l
// prod C_l^alpha_l, concentrations on the mol/L basis and partial pressures
// in bar. Rows whose literature units are kg/(m3 s) carry mass_basis_of: the
// evaluated rate is divided by that species' molar mass to obtain mol/(m3 s).
struct RateLaw {
  double k_r = 0.0;
  double n = 0.0;
  double E_A = 0.0;  // J/mol
  // exponent, flat species index
  std::vector<std::pair<std::size_t, double>> alpha;
  std::vector<std::pair<std::size_t, double>> beta;
  double tuning_scale = 1.0;
  int mass_basis_of = -1;      // flat species index, or -1 for molar rates
  double unit_factor = 1.0;    // extra conversion (Spang 1/h rows)
};

class ReactionSet {
 public:
  // profile: "default" (Table of literature coefficients) or "spang"
  // (alternative clinker-formation rows r1-r5).
  static ReactionSet builtin(const std::string& profile = "default");
  static ReactionSet load(const std::string& path,
                          const std::string& profile = "default");
  void save(const std::string& path) const;

  // Signed stoichiometry, rows = reactions, cols = flat species; integer and
  // element-conserving (verified at construction).
  const std::array<std::array<int, kNumSpecies>, kNumReactions>& nu() const {
    return nu_;
  }
  const std::array<RateLaw, kNumReactions>& laws() const { return laws_; }
  RateLaw& law(std::size_t i) { return laws_[i]; }

  void set_tuning(const std::array<double, kNumReactions>& scales);
  std::array<double, kNumReactions> tuning() const;

 private:
  void verify_element_conservation() const;
  std::array<std::array<int, kNumSpecies>, kNumReactions> nu_{};
  std::array<RateLaw, kNumReactions> laws_{};
};

// k(T) = tuning * k_r T^n exp(-E_A / RT), in the law's own units.
double rate_constant(const RateLaw& law, double T);

// All 12 reaction rates [mol/(m3 s)]; negative concentrations are clamped.
std::array<double, kNumReactions> reaction_rates(
    const ReactionSet& set, const CompoundTable& table, double T, double P,
    const SolidVec& C_s, const GasVec& C_g);

struct ProductionRates {
  SolidVec solids{};
  GasVec gases{};
};

// R = nu^T r.
ProductionRates production_rates(const ReactionSet& set,
                                 const std::array<double, kNumReactions>& r);

// Enthalpy flux of the CO2 released by calcination (reaction #1), evaluated
// at the solid temperature [W/m3]. Transfers heat from solid to gas phase in
// the modules with separate solid/gas energies.
double calcination_heat(const CompoundTable& table, double T_s, double P,
                        double r1);

}  // namespace pyro
