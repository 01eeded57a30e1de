#include "pyro/compounds.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"

namespace pyro {

double CpPolynomial::value(double T) const {
  const double t = std::max(T, kCpClampT);
  return c0 + c1 * t + c2 * t * t + cm2 / (t * t) + cmh / std::sqrt(t);
}

namespace {

// Antiderivative of the polynomial (valid above the clamp temperature).
double cp_antiderivative(const CpPolynomial& p, double T) {
  return p.c0 * T + 0.5 * p.c1 * T * T + p.c2 * T * T * T / 3.0 - p.cm2 / T +
         2.0 * p.cmh * std::sqrt(T);
}

}  // namespace

double CpPolynomial::integral_from_ref(const double T) const {
  const double lo = kReferenceT;  // always above the clamp
  if (T >= kCpClampT)
    return cp_antiderivative(*this, T) - cp_antiderivative(*this, lo);
  // Constant extension below the clamp temperature.
  return cp_antiderivative(*this, kCpClampT) - cp_antiderivative(*this, lo) +
         value(kCpClampT) * (T - kCpClampT);
}

namespace {

struct RawRow {
  const char* name;
  bool gas;
  double M_g_mol;       // g/mol
  double dHf_kJ_mol;    // kJ/mol
  // cp columns in table units: C0 [J/molK], C1 [1e-3 J/molK2],
  // C2 [1e-5 J/molK3], Cm2 [1e6 JK/mol], Cmh [J/molK^0.5]
  double C0, C1e3, C2e5, Cm2e6, Cmh;
  double Tmin, Tmax;
  // solids: density [g/cm3], conductivity [W/Km]
  double rho_g_cm3, k_solid;
  // gases: conductivity anchors [mW/Km] at (kT1, kT2), viscosity anchors
  // [uPa s] at (muT1, muT2), diffusion volume [cm3]. Negative value = absent.
  double kT1, k1, kT2, k2;
  double muT1, mu1, muT2, mu2;
  double Vdiff;
};

// Reference data. CaCO3's linear cp coefficient is stored in J/(mol K2)
// directly (320 in table units): the literature value is 0.32 J/(mol K2) and
// the scaled reading would make cp negative near ambient temperature.
// H2O transport: the 300 K tabulated points are liquid-phase values, so the
// viscosity uses the 1000 K anchor alone (Sutherland S supplied by config)
// and the conductivity uses a steam-like line through (1000 K, 95.877) with
// zero intercept. CO's upper conductivity anchor is at 600 K.
constexpr RawRow kRows[kNumSpecies] = {
    // name, gas, M, dHf, C0, C1e3, C2e5, Cm2e6, Cmh, Tmin, Tmax, rho, ks,
    //   kT1,k1, kT2,k2, muT1,mu1, muT2,mu2, Vdiff
    {"CaCO3", false, 100.09, -1207.6, -184.79, 320.0, -0.13, -3.69, 3883.5,
     298, 750, 2.71, 2.248, -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"CaO", false, 56.08, -634.9, 71.69, -3.08, 0.22, 0, 0, 200, 1800, 3.34,
     30.1, -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"SiO2", false, 60.09, -910.7, 58.91, 5.02, 0, 0, 0, 844, 1800, 2.65, 1.4,
     -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"Al2O3", false, 101.96, -1675.7, 233.004, -19.59, 0.94, 0, 0, 200, 1800,
     3.99, 36.0, -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"Fe2O3", false, 159.69, -824.2, 103.9, 0, 0, 0, 0, 200, 1800, 5.25,
     0.335, -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"C2S", false, 172.24, -2053.1, 199.6, 0, 0, 0, 0, 1650, 1800, 3.31, 3.45,
     -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"C3S", false, 228.32, -2704.1, 333.92, -2.33, 0, 0, 0, 200, 1800, 3.13,
     3.35, -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"C3A", false, 270.19, -3602.5, 260.58, 4.79, 0, 0, 0, 298, 1800, 3.04,
     3.74, -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"C4AF", false, 485.97, -4998.6, 374.43, 36.4, 0, 0, 0, 298, 1863, 3.8,
     3.17, -1, 0, -1, 0, -1, 0, -1, 0, 0},
    {"CO2", true, 44.01, -393.5, 25.98, 43.61, -1.49, 0, 0, 298, 1500, 0, 0,
     300, 16.77, 1000, 70.78, 300, 15.0, 1000, 41.18, 16.3},
    {"N2", true, 28.014, 0.0, 27.31, 5.19, -1.55e-4, 0, 0, 298, 1500, 0, 0,
     300, 25.97, 1000, 65.36, 300, 17.89, 1000, 41.54, 18.5},
    {"O2", true, 31.998, 0.0, 25.82, 12.63, -0.36, 0, 0, 298, 1100, 0, 0, 300,
     26.49, 1000, 71.55, 300, 20.65, 1000, 49.12, 16.3},
    {"Ar", true, 39.948, 0.0, 20.79, 0, 0, 0, 0, 298, 1500, 0, 0, 300, 17.84,
     1000, 43.58, 300, 22.74, 1000, 55.69, 16.2},
    {"CO", true, 28.010, -110.5, 26.87, 6.94, -0.08, 0, 0, 298, 1500, 0, 0,
     300, 25.0, 600, 43.2, 300, 17.8, 1000, 29.1, 18.0},
    {"Csus", true, 12.011, 0.0, -0.45, 35.53, -1.31, 0, 0, 298, 1500, 0, 0,
     -1, 0, -1, 0, -1, 0, -1, 0, 15.9},
    {"H2O", true, 18.015, -241.8, 30.89, 7.86, 0.25, 0, 0, 298, 1300, 0, 0,
     500, 47.9385, 1000, 95.877, -1, 0, 1000, 37.615, 13.1},
    {"H2", true, 2.016, 0.0, 28.95, -0.58, 0.19, 0, 0, 298, 1500, 0, 0, 300,
     193.1, 1000, 459.7, 300, 8.938, 1000, 20.73, 6.12},
};

CompoundRecord make_record(const RawRow& r) {
  CompoundRecord rec;
  rec.name = r.name;
  rec.is_gas = r.gas;
  rec.molar_mass = r.M_g_mol * 1e-3;
  rec.formation_enthalpy = r.dHf_kJ_mol * 1e3;
  rec.cp = {r.C0, r.C1e3 * 1e-3, r.C2e5 * 1e-5, r.Cm2e6 * 1e6, r.Cmh, r.Tmin,
            r.Tmax};
  rec.solid_density = r.rho_g_cm3 * 1e3;
  rec.solid_conductivity = r.k_solid;
  if (r.kT1 > 0) rec.k_anchor_lo = Anchor{r.kT1, r.k1 * 1e-3};
  if (r.kT2 > 0) rec.k_anchor_hi = Anchor{r.kT2, r.k2 * 1e-3};
  if (r.muT1 > 0) rec.mu_anchor_lo = Anchor{r.muT1, r.mu1 * 1e-6};
  if (r.muT2 > 0) rec.mu_anchor_hi = Anchor{r.muT2, r.mu2 * 1e-6};
  rec.diffusion_volume = r.Vdiff;
  return rec;
}

// Solves (T_hi/T_lo)^1.5 (T_lo+S)/(T_hi+S) = mu_hi/mu_lo for S. Negative S
// can result (CO's tabulated pair does this); acceptable while T + S stays
// positive over the working temperature range.
double calibrate_sutherland(const Anchor& lo, const Anchor& hi) {
  const double q = (hi.value / lo.value) / std::pow(hi.T / lo.T, 1.5);
  if (q >= 1.0) throw Error("Sutherland calibration: anchors not representable");
  const double S = (hi.T * q - lo.T) / (1.0 - q);
  if (S <= -kTemperatureMin)
    throw Error("Sutherland calibration: constant singular in working range");
  return S;
}

}  // namespace

void CompoundTable::finalize(double h2o_sutherland_S) {
  for (std::size_t i = 0; i < kNumSpecies; ++i) {
    CompoundRecord& rec = records_[i];
    if (rec.molar_mass <= 0.0)
      throw Error("compound " + rec.name + ": molar mass must be positive");
    if (!rec.is_gas && rec.solid_density <= 0.0)
      throw Error("compound " + rec.name + ": solid density must be positive");
    // Elements in their standard state carry zero formation enthalpy.
    if ((rec.name == "N2" || rec.name == "O2" || rec.name == "Ar" ||
         rec.name == "H2" || rec.name == "Csus") &&
        rec.formation_enthalpy != 0.0)
      throw Error("compound " + rec.name +
                  ": standard-state element must have zero formation enthalpy");
    for (double T = 200.0; T <= 2600.0; T += 25.0)
      if (rec.cp.value(T) <= 0.0)
        throw Error("compound " + rec.name + ": cp not positive at T=" +
                    std::to_string(T));
    rec.has_conductivity = rec.k_anchor_lo && rec.k_anchor_hi;
    if (rec.is_gas && rec.mu_anchor_hi) {
      if (rec.mu_anchor_lo) {
        rec.sutherland_mu0 = rec.mu_anchor_lo->value;
        rec.sutherland_T0 = rec.mu_anchor_lo->T;
        rec.sutherland_S =
            calibrate_sutherland(*rec.mu_anchor_lo, *rec.mu_anchor_hi);
      } else {
        // Single-anchor fit (H2O): S is a configured constant.
        rec.sutherland_mu0 = rec.mu_anchor_hi->value;
        rec.sutherland_T0 = rec.mu_anchor_hi->T;
        rec.sutherland_S = h2o_sutherland_S;
      }
      rec.has_viscosity = true;
    }
  }
}

CompoundTable CompoundTable::builtin(double h2o_sutherland_S) {
  CompoundTable table;
  for (std::size_t i = 0; i < kNumSpecies; ++i) {
    table.records_[i] = make_record(kRows[i]);
    if (table.records_[i].name != species_name(i))
      throw Error("compound table ordering mismatch");
  }
  table.finalize(h2o_sutherland_S);
  return table;
}

// CSV column order (header included in the file):
//   name,phase,molar_mass_g_mol,dHf_kJ_mol,
//   cp_C0,cp_C1_1e3,cp_C2_1e5,cp_Cm2_1e6,cp_Cmh,cp_Tmin_K,cp_Tmax_K,
//   density_g_cm3,conductivity_W_mK,
//   k_T1_K,k1_mW_mK,k_T2_K,k2_mW_mK,mu_T1_K,mu1_uPas,mu_T2_K,mu2_uPas,
//   diffusion_volume_cm3
// Missing anchors are written as empty fields.
CompoundTable CompoundTable::load(const std::string& path,
                                  double h2o_sutherland_S) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open compound data file: " + path);
  std::string line;
  std::getline(in, line);  // header
  CompoundTable table;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (n >= kNumSpecies) throw Error(path + ": too many rows");
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() < 22) throw Error(path + ": row has too few columns");
    auto num = [&](std::size_t i) { return std::stod(f[i]); };
    auto opt = [&](std::size_t i) -> double {
      return f[i].empty() ? -1.0 : std::stod(f[i]);
    };
    RawRow r{};
    const std::string name_holder = f[0];
    r.name = name_holder.c_str();
    r.gas = f[1] == "gas";
    r.M_g_mol = num(2);
    r.dHf_kJ_mol = num(3);
    r.C0 = num(4);
    r.C1e3 = num(5);
    r.C2e5 = num(6);
    r.Cm2e6 = num(7);
    r.Cmh = num(8);
    r.Tmin = num(9);
    r.Tmax = num(10);
    r.rho_g_cm3 = f[11].empty() ? 0.0 : num(11);
    r.k_solid = f[12].empty() ? 0.0 : num(12);
    r.kT1 = opt(13);
    r.k1 = r.kT1 > 0 ? num(14) : 0.0;
    r.kT2 = opt(15);
    r.k2 = r.kT2 > 0 ? num(16) : 0.0;
    r.muT1 = opt(17);
    r.mu1 = r.muT1 > 0 ? num(18) : 0.0;
    r.muT2 = opt(19);
    r.mu2 = r.muT2 > 0 ? num(20) : 0.0;
    r.Vdiff = f[21].empty() ? 0.0 : num(21);
    if (f[0] != species_name(n))
      throw Error(path + ": expected species " +
                  std::string(species_name(n)) + " at row " +
                  std::to_string(n) + ", got " + f[0]);
    table.records_[n] = make_record(r);
    ++n;
  }
  if (n != kNumSpecies) throw Error(path + ": expected 17 species rows");
  table.finalize(h2o_sutherland_S);
  return table;
}

void CompoundTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write compound data file: " + path);
  out << "name,phase,molar_mass_g_mol,dHf_kJ_mol,cp_C0,cp_C1_1e3,cp_C2_1e5,"
         "cp_Cm2_1e6,cp_Cmh,cp_Tmin_K,cp_Tmax_K,density_g_cm3,"
         "conductivity_W_mK,k_T1_K,k1_mW_mK,k_T2_K,k2_mW_mK,mu_T1_K,"
         "mu1_uPas,mu_T2_K,mu2_uPas,diffusion_volume_cm3\n";
  out.precision(12);
  for (const CompoundRecord& r : records_) {
    out << r.name << ',' << (r.is_gas ? "gas" : "solid") << ','
        << r.molar_mass * 1e3 << ',' << r.formation_enthalpy * 1e-3 << ','
        << r.cp.c0 << ',' << r.cp.c1 * 1e3 << ',' << r.cp.c2 * 1e5 << ','
        << r.cp.cm2 * 1e-6 << ',' << r.cp.cmh << ',' << r.cp.valid_min << ','
        << r.cp.valid_max << ',';
    if (!r.is_gas)
      out << r.solid_density * 1e-3 << ',' << r.solid_conductivity << ',';
    else
      out << ",,";
    auto anchor = [&](const std::optional<Anchor>& a, double scale) {
      if (a)
        out << a->T << ',' << a->value * scale << ',';
      else
        out << ",,";
    };
    anchor(r.k_anchor_lo, 1e3);
    anchor(r.k_anchor_hi, 1e3);
    anchor(r.mu_anchor_lo, 1e6);
    anchor(r.mu_anchor_hi, 1e6);
    out << (r.is_gas ? r.diffusion_volume : 0.0) << '\n';
  }
}

}  // namespace pyro
