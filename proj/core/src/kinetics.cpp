#include "pyro/kinetics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/properties.hpp"

namespace pyro {

namespace {

constexpr std::size_t S(Solid s) { return flat(s); }
constexpr std::size_t G(Gas g) { return flat(g); }

struct Entry {
  std::size_t species;
  int coeff;
};

struct ReactionDef {
  std::initializer_list<Entry> stoich;
  double k_r, n, E_A_kJ;
  std::initializer_list<std::pair<std::size_t, double>> alpha;
  std::initializer_list<std::pair<std::size_t, double>> beta;
  int mass_basis_of;  // -1 = molar rate units
};

// Reactions #1-#6 clinker formation, #7-#12 fuel chemistry. Rows #1-#5 are
// published in kg/(m3 s); mass_basis_of names the first-listed solid
// reactant whose molar mass converts them to molar rates.
const ReactionDef kDefault[kNumReactions] = {
    // #1 CaCO3 -> CaO + CO2
    {{{S(Solid::CaCO3), -1}, {S(Solid::CaO), 1}, {G(Gas::CO2), 1}},
     1e8, 0.0, 175.70, {{S(Solid::CaCO3), 1.0}}, {},
     static_cast<int>(S(Solid::CaCO3))},
    // #2 2CaO + SiO2 -> C2S
    {{{S(Solid::CaO), -2}, {S(Solid::SiO2), -1}, {S(Solid::C2S), 1}},
     1e7, 0.0, 240.00, {{S(Solid::CaO), 2.0}, {S(Solid::SiO2), 1.0}}, {},
     static_cast<int>(S(Solid::CaO))},
    // #3 CaO + C2S -> C3S
    {{{S(Solid::CaO), -1}, {S(Solid::C2S), -1}, {S(Solid::C3S), 1}},
     1e9, 0.0, 420.00, {{S(Solid::CaO), 1.0}, {S(Solid::C2S), 1.0}}, {},
     static_cast<int>(S(Solid::CaO))},
    // #4 3CaO + Al2O3 -> C3A
    {{{S(Solid::CaO), -3}, {S(Solid::Al2O3), -1}, {S(Solid::C3A), 1}},
     1e8, 0.0, 310.00, {{S(Solid::CaO), 3.0}, {S(Solid::Al2O3), 1.0}}, {},
     static_cast<int>(S(Solid::CaO))},
    // #5 4CaO + Al2O3 + Fe2O3 -> C4AF
    {{{S(Solid::CaO), -4},
      {S(Solid::Al2O3), -1},
      {S(Solid::Fe2O3), -1},
      {S(Solid::C4AF), 1}},
     1e8, 0.0, 330.00,
     {{S(Solid::CaO), 4.0}, {S(Solid::Al2O3), 1.0}, {S(Solid::Fe2O3), 1.0}},
     {}, static_cast<int>(S(Solid::CaO))},
    // #6 C3S -> C2S + CaO (reverse of #3; negligible below ~900 C)
    {{{S(Solid::C3S), -1}, {S(Solid::C2S), 1}, {S(Solid::CaO), 1}},
     0.09, 0.0, 96.58, {{S(Solid::C3S), 1.0}}, {}, -1},
    // #7 2C + O2 -> 2CO
    {{{G(Gas::Csus), -2}, {G(Gas::O2), -1}, {G(Gas::CO), 2}},
     8.82e13, 0.0, 239.00, {{G(Gas::Csus), 1.0}, {G(Gas::O2), 0.5}}, {}, -1},
    // #8 C + H2O -> CO + H2
    {{{G(Gas::Csus), -1}, {G(Gas::H2O), -1}, {G(Gas::CO), 1}, {G(Gas::H2), 1}},
     2.62e8, 0.0, 237.00, {{G(Gas::Csus), 1.0}}, {{G(Gas::H2O), 0.57}}, -1},
    // #9 C + CO2 -> 2CO
    {{{G(Gas::Csus), -1}, {G(Gas::CO2), -1}, {G(Gas::CO), 2}},
     3.1e6, 0.0, 215.00, {{G(Gas::Csus), 1.0}}, {{G(Gas::CO2), 0.38}}, -1},
    // #10 2CO + O2 -> 2CO2
    {{{G(Gas::CO), -2}, {G(Gas::O2), -1}, {G(Gas::CO2), 2}},
     7.0e4, 0.0, 66.51, {{G(Gas::CO), 1.0}, {G(Gas::O2), 1.0}}, {}, -1},
    // #11 CO + H2O -> CO2 + H2
    {{{G(Gas::CO), -1}, {G(Gas::H2O), -1}, {G(Gas::CO2), 1}, {G(Gas::H2), 1}},
     2.75e6, 0.0, 83.68, {{G(Gas::CO), 1.0}, {G(Gas::H2O), 1.0}}, {}, -1},
    // #12 2H2 + O2 -> 2H2O
    {{{G(Gas::H2), -2}, {G(Gas::O2), -1}, {G(Gas::H2O), 2}},
     1.37e6, 0.51, 295.48, {{G(Gas::H2), 1.0}, {G(Gas::O2), 1.0}}, {}, -1},
};

// Alternative clinker-formation coefficients (1/h basis, first-order in the
// mol/L concentrations); converted to mol/(m3 s) by 1000/3600.
struct SpangRow {
  double k_r, E_A_kJ;
};
const SpangRow kSpang[5] = {
    {1.64e35, 804.8}, {14.8e8, 193.1}, {4.8e8, 255.9},
    {300e8, 193.8},   {30e11, 184.9},
};

// Overall tuning reported for the reference scenario.
constexpr double kDefaultTuning[kNumReactions] = {
    170.0, 2e5, 6e6, 5e6, 5e10, 1.0, 5e5, 1.0, 1.0, 60.0, 1.0, 1.0};

}  // namespace

void ReactionSet::verify_element_conservation() const {
  for (std::size_t r = 0; r < kNumReactions; ++r)
    for (std::size_t e = 0; e < kNumElements; ++e) {
      int sum = 0;
      for (std::size_t s = 0; s < kNumSpecies; ++s)
        sum += kElementMatrix[e][s] * nu_[r][s];
      if (sum != 0)
        throw Error("reaction #" + std::to_string(r + 1) +
                    " does not conserve element " +
                    std::string(kElementNames[e]));
    }
}

ReactionSet ReactionSet::builtin(const std::string& profile) {
  if (profile != "default" && profile != "spang")
    throw Error("unknown kinetics profile: " + profile);
  ReactionSet set;
  for (std::size_t r = 0; r < kNumReactions; ++r) {
    const ReactionDef& d = kDefault[r];
    for (const Entry& e : d.stoich) set.nu_[r][e.species] = e.coeff;
    RateLaw law;
    law.k_r = d.k_r;
    law.n = d.n;
    law.E_A = d.E_A_kJ * 1e3;
    law.alpha.assign(d.alpha.begin(), d.alpha.end());
    law.beta.assign(d.beta.begin(), d.beta.end());
    law.mass_basis_of = d.mass_basis_of;
    law.tuning_scale = kDefaultTuning[r];
    set.laws_[r] = law;
  }
  if (profile == "spang") {
    for (std::size_t r = 0; r < 5; ++r) {
      RateLaw& law = set.laws_[r];
      law.k_r = kSpang[r].k_r;
      law.E_A = kSpang[r].E_A_kJ * 1e3;
      law.n = 0.0;
      law.beta.clear();
      law.mass_basis_of = -1;
      law.unit_factor = 1000.0 / 3600.0;
      law.tuning_scale = 1.0;
    }
  }
  set.verify_element_conservation();
  return set;
}

double rate_constant(const RateLaw& law, double T) {
  if (!(T > 0.0)) throw Error("rate_constant: T must be positive");
  return law.tuning_scale * law.k_r * std::pow(T, law.n) *
         std::exp(-law.E_A / (kGasConstant * T));
}

std::array<double, kNumReactions> reaction_rates(
    const ReactionSet& set, const CompoundTable& table, double T, double P,
    const SolidVec& C_s, const GasVec& C_g) {
  // Concentrations on the mol/L basis; partial pressures in bar.
  std::array<double, kNumSpecies> conc{};
  for (std::size_t i = 0; i < kNumSolids; ++i)
    conc[i] = std::max(C_s[i], 0.0) * 1e-3;
  double c_gas_total = 0.0;
  for (std::size_t i = 0; i < kNumGases; ++i) {
    conc[kNumSolids + i] = std::max(C_g[i], 0.0) * 1e-3;
    c_gas_total += conc[kNumSolids + i];
  }
  std::array<double, kNumReactions> r{};
  for (std::size_t j = 0; j < kNumReactions; ++j) {
    const RateLaw& law = set.laws()[j];
    double rate = rate_constant(law, T) * law.unit_factor;
    for (const auto& [s, a] : law.alpha) {
      const double c = conc[s];
      rate = c > 0.0 ? rate * std::pow(c, a) : 0.0;
      if (rate == 0.0) break;
    }
    if (rate != 0.0)
      for (const auto& [s, b] : law.beta) {
        const double x = c_gas_total > 0.0 ? conc[s] / c_gas_total : 0.0;
        const double p_bar = pa_to_bar(x * P);
        rate = p_bar > 0.0 ? rate * std::pow(p_bar, b) : 0.0;
      }
    if (law.mass_basis_of >= 0)
      rate /= table.molar_mass(static_cast<std::size_t>(law.mass_basis_of));
    r[j] = rate;
  }
  return r;
}

ProductionRates production_rates(const ReactionSet& set,
                                 const std::array<double, kNumReactions>& r) {
  ProductionRates out;
  const auto& nu = set.nu();
  for (std::size_t j = 0; j < kNumReactions; ++j) {
    if (r[j] == 0.0) continue;
    for (std::size_t s = 0; s < kNumSolids; ++s)
      out.solids[s] += nu[j][s] * r[j];
    for (std::size_t g = 0; g < kNumGases; ++g)
      out.gases[g] += nu[j][kNumSolids + g] * r[j];
  }
  return out;
}

double calcination_heat(const CompoundTable& table, double T_s, double P,
                        double r1) {
  if (r1 == 0.0) return 0.0;
  GasVec co2{};
  co2[idx(Gas::CO2)] = r1;
  (void)P;  // ideal-gas enthalpy is pressure independent
  return enthalpy_gas(table, T_s, co2);
}

void ReactionSet::set_tuning(const std::array<double, kNumReactions>& scales) {
  for (std::size_t i = 0; i < kNumReactions; ++i)
    laws_[i].tuning_scale = scales[i];
}

std::array<double, kNumReactions> ReactionSet::tuning() const {
  std::array<double, kNumReactions> t{};
  for (std::size_t i = 0; i < kNumReactions; ++i) t[i] = laws_[i].tuning_scale;
  return t;
}

// Rate-law data file: 12 rows
//   id,k_r,n,E_A_kJ_mol,alpha(species:power;...),beta(...),mass_basis,tuning
ReactionSet ReactionSet::load(const std::string& path,
                              const std::string& profile) {
  ReactionSet set = builtin(profile);
  std::ifstream in(path);
  if (!in) throw Error("cannot open rate-law data file: " + path);
  std::string line;
  std::getline(in, line);  // header
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (n >= kNumReactions) throw Error(path + ": too many rows");
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> f;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() < 8) throw Error(path + ": row has too few columns");
    RateLaw& law = set.laws_[n];
    law.k_r = std::stod(f[1]);
    law.n = std::stod(f[2]);
    law.E_A = std::stod(f[3]) * 1e3;
    auto parse_powers = [&](const std::string& text) {
      std::vector<std::pair<std::size_t, double>> out;
      std::stringstream ps(text);
      std::string term;
      while (std::getline(ps, term, ';')) {
        if (term.empty()) continue;
        const auto colon = term.find(':');
        const std::size_t sp = species_index(term.substr(0, colon));
        if (sp >= kNumSpecies)
          throw Error(path + ": unknown species in " + term);
        out.emplace_back(sp, std::stod(term.substr(colon + 1)));
      }
      return out;
    };
    law.alpha = parse_powers(f[4]);
    law.beta = parse_powers(f[5]);
    law.mass_basis_of =
        f[6].empty() ? -1 : static_cast<int>(species_index(f[6]));
    law.tuning_scale = std::stod(f[7]);
    ++n;
  }
  if (n != kNumReactions) throw Error(path + ": expected 12 reaction rows");
  return set;
}

void ReactionSet::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write rate-law data file: " + path);
  out << "id,k_r,n,E_A_kJ_mol,alpha,beta,mass_basis,tuning\n";
  out.precision(12);
  for (std::size_t j = 0; j < kNumReactions; ++j) {
    const RateLaw& law = laws_[j];
    out << "r" << j + 1 << ',' << law.k_r << ',' << law.n << ','
        << law.E_A * 1e-3 << ',';
    auto powers = [&](const std::vector<std::pair<std::size_t, double>>& v) {
      std::string s;
      for (const auto& [sp, p] : v) {
        if (!s.empty()) s += ';';
        s += std::string(species_name(sp)) + ':' + std::to_string(p);
      }
      return s;
    };
    out << powers(law.alpha) << ',' << powers(law.beta) << ',';
    if (law.mass_basis_of >= 0) out << species_name(law.mass_basis_of);
    out << ',' << law.tuning_scale << '\n';
  }
}

}  // namespace pyro
