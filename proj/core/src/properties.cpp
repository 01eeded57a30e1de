#include "pyro/properties.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/warnings.hpp"

namespace pyro {

namespace {
inline double clamp0(double v) { return v > 0.0 ? v : 0.0; }
}  // namespace

double LiningMaterial::enthalpy_density(double T) const {
  return volumetric_heat_capacity() * (T - kReferenceT);
}

double LiningMaterial::temperature(double U_hat) const {
  return kReferenceT + U_hat / volumetric_heat_capacity();
}

double cp_molar(const CompoundTable& table, std::size_t flat_index,
                double T) {
  if (flat_index >= kNumSpecies) throw Error("cp_molar: unknown species");
  if (!(T > 0.0)) throw Error("cp_molar: temperature must be positive");
  return table.species(flat_index).cp.value(T);
}

double heat_capacity(const CompoundTable& table, double T,
                     std::span<const double> n, bool gas_phase) {
  const std::size_t off = gas_phase ? kNumSolids : 0;
  double c = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i)
    c += clamp0(n[i]) * table.species(off + i).cp.value(T);
  return c;
}

double enthalpy_solid(const CompoundTable& table, double T,
                      const SolidVec& n) {
  double h = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i) {
    const double ni = clamp0(n[i]);
    if (ni == 0.0) continue;
    const CompoundRecord& r = table.species(i);
    h += ni * (r.formation_enthalpy + r.cp.integral_from_ref(T));
  }
  return h;
}

double enthalpy_gas(const CompoundTable& table, double T, const GasVec& n) {
  double h = 0.0;
  for (std::size_t i = 0; i < kNumGases; ++i) {
    const double ni = clamp0(n[i]);
    if (ni == 0.0) continue;
    const CompoundRecord& r = table.species(kNumSolids + i);
    h += ni * (r.formation_enthalpy + r.cp.integral_from_ref(T));
  }
  return h;
}

double volume_solid(const CompoundTable& table, const SolidVec& n,
                    double bed_porosity) {
  double v = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i) {
    const CompoundRecord& r = table.species(i);
    v += clamp0(n[i]) * r.molar_mass / r.solid_density;
  }
  return v / (1.0 - bed_porosity);
}

double volume_gas(double T, double P, const GasVec& n) {
  double c = 0.0;
  for (double ni : n) c += clamp0(ni);
  return c * kGasConstant * T / P;
}

Densities densities(const CompoundTable& table, std::span<const double> C,
                    bool gas_phase, double V_hat, double porosity) {
  if (porosity < 0.0 || porosity >= 1.0)
    throw Error("densities: porosity must lie in [0, 1)");
  constexpr double kSpherePackingMin = 1.0 - kPi / (3.0 * std::numbers::sqrt2);
  if (porosity != 0.0 && porosity < kSpherePackingMin)
    warn_once("bulk porosity " + std::to_string(porosity) +
              " below the sphere-packing bound 0.2595");
  const std::size_t off = gas_phase ? kNumSolids : 0;
  Densities d;
  for (std::size_t i = 0; i < C.size(); ++i)
    d.segment += clamp0(C[i]) * table.species(off + i).molar_mass;
  if (d.segment > 0.0 && V_hat <= 0.0)
    throw Error("densities: zero phase volume with nonzero content");
  d.particle = V_hat > 0.0 ? d.segment / V_hat : 0.0;
  d.bulk = (1.0 - porosity) * d.particle;
  return d;
}

// --- Viscosity --------------------------------------------------------------

double pure_gas_viscosity(const CompoundTable& table, Gas species, double T) {
  const CompoundRecord& r = table.gas(species);
  if (!r.has_viscosity)
    throw Error("pure_gas_viscosity: no anchors for " + r.name);
  if (!(T > 0.0)) throw Error("pure_gas_viscosity: T must be positive");
  const double T0 = r.sutherland_T0;
  return r.sutherland_mu0 * std::pow(T / T0, 1.5) * (T0 + r.sutherland_S) /
         (T + r.sutherland_S);
}

namespace {

// Wilke / Mason-Saxena interaction weights over the transport-active gas
// species (Csus carries no transport data and is excluded).
struct ActiveGas {
  std::array<std::size_t, kNumGases> id{};
  std::array<double, kNumGases> x{};
  std::size_t n = 0;
};

ActiveGas active_fractions(const GasVec& C_g) {
  ActiveGas a;
  double total = 0.0;
  for (std::size_t i = 0; i < kNumGases; ++i) {
    if (i == idx(Gas::Csus)) continue;
    const double c = clamp0(C_g[i]);
    if (c > 0.0) {
      a.id[a.n] = i;
      a.x[a.n] = c;
      ++a.n;
      total += c;
    }
  }
  for (std::size_t k = 0; k < a.n; ++k) a.x[k] /= total;
  return a;
}

double phi_ij(double mu_i, double mu_j, double M_i, double M_j) {
  const double num = 1.0 + std::sqrt(mu_i / mu_j) * std::pow(M_j / M_i, 0.25);
  return num * num / (2.0 * std::numbers::sqrt2 * std::sqrt(1.0 + M_i / M_j));
}

}  // namespace

double gas_viscosity(const CompoundTable& table, double T, const GasVec& C_g) {
  const ActiveGas a = active_fractions(C_g);
  if (a.n == 0) throw Error("gas_viscosity: empty gas composition");
  std::array<double, kNumGases> mu{}, M{};
  for (std::size_t k = 0; k < a.n; ++k) {
    mu[k] = pure_gas_viscosity(table, static_cast<Gas>(a.id[k]), T);
    M[k] = table.species(kNumSolids + a.id[k]).molar_mass;
  }
  double result = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    double denom = 0.0;
    for (std::size_t j = 0; j < a.n; ++j)
      denom += a.x[j] * phi_ij(mu[i], mu[j], M[i], M[j]);
    result += a.x[i] * mu[i] / denom;
  }
  return result;
}

double mixture_viscosity(const CompoundTable& table, double T,
                         const GasVec& C_g, double V_hat_s) {
  if (V_hat_s >= 0.5)
    throw Error("mixture_viscosity: solid fraction >= 0.5 (Einstein form)");
  const double phi = clamp0(V_hat_s);
  return gas_viscosity(table, T, C_g) * (1.0 + 0.5 * phi) / (1.0 - 2.0 * phi);
}

// --- Conductivity ------------------------------------------------------------

double pure_gas_conductivity(const CompoundTable& table, Gas species,
                             double T) {
  const CompoundRecord& r = table.gas(species);
  if (!r.has_conductivity)
    throw Error("pure_gas_conductivity: no anchors for " + r.name);
  const Anchor& lo = *r.k_anchor_lo;
  const Anchor& hi = *r.k_anchor_hi;
  return lo.value + (hi.value - lo.value) * (T - lo.T) / (hi.T - lo.T);
}

double gas_conductivity(const CompoundTable& table, double T,
                        const GasVec& C_g) {
  const ActiveGas a = active_fractions(C_g);
  if (a.n == 0) throw Error("gas_conductivity: empty gas composition");
  std::array<double, kNumGases> mu{}, M{}, kg{};
  for (std::size_t k = 0; k < a.n; ++k) {
    mu[k] = pure_gas_viscosity(table, static_cast<Gas>(a.id[k]), T);
    M[k] = table.species(kNumSolids + a.id[k]).molar_mass;
    kg[k] = pure_gas_conductivity(table, static_cast<Gas>(a.id[k]), T);
  }
  double result = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    double denom = 0.0;
    for (std::size_t j = 0; j < a.n; ++j)
      denom += a.x[j] * phi_ij(mu[i], mu[j], M[i], M[j]);
    result += a.x[i] * kg[i] / denom;
  }
  return result;
}

double solid_conductivity(const CompoundTable& table, const SolidVec& C_s) {
  double vol = 0.0, resist = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i) {
    const CompoundRecord& r = table.species(i);
    const double v = clamp0(C_s[i]) * r.molar_mass / r.solid_density;
    vol += v;
    resist += v / r.solid_conductivity;
  }
  if (vol == 0.0) throw Error("solid_conductivity: empty solid composition");
  return vol / resist;
}

double bulk_conductivity_with_gas(const CompoundTable& table,
                                  const SolidVec& C_s, double k_gas,
                                  double porosity) {
  const double k_s = solid_conductivity(table, C_s);
  return 1.0 / (porosity / k_gas + (1.0 - porosity) / k_s);
}

double suspension_conductivity(const CompoundTable& table, double T,
                               const SolidVec& C_s, const GasVec& C_g) {
  // Per unit of segment volume: gas layer V_hat_g plus one layer per solid.
  const double k_g = gas_conductivity(table, T, C_g);
  double v_solid = 0.0, resist = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i) {
    const CompoundRecord& r = table.species(i);
    const double v = clamp0(C_s[i]) * r.molar_mass / r.solid_density;
    v_solid += v;
    resist += v / r.solid_conductivity;
  }
  const double v_gas = std::max(1.0 - v_solid, 0.0);
  resist += v_gas / k_g;
  return 1.0 / resist;
}

// --- Emissivity --------------------------------------------------------------

WsggCoefficients WsggCoefficients::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open WSGG coefficient file: " + path);
  nlohmann::json j;
  in >> j;
  WsggCoefficients w;
  const auto& grey = j.at("grey_gases");
  if (grey.size() != 4) throw Error(path + ": expected 4 grey gases");
  for (std::size_t g = 0; g < 4; ++g) {
    w.K1[g] = grey[g].at("K1").get<double>();
    w.K2[g] = grey[g].at("K2").get<double>();
    for (std::size_t i = 0; i < 3; ++i) {
      w.C1[g][i] = grey[g].at("C1")[i].get<double>();
      w.C2[g][i] = grey[g].at("C2")[i].get<double>();
      w.C3[g][i] = grey[g].at("C3")[i].get<double>();
    }
  }
  return w;
}

namespace {

constexpr double kWsggTref = 1200.0;

double wsgg_emissivity(const WsggCoefficients& w, double T, double S_m,
                       double P_bar, double x_h2o, double x_co2) {
  const double mr = x_h2o / x_co2;
  const double pL = P_bar * (x_h2o + x_co2) * S_m;  // bar m
  double eps = 0.0;
  double a_sum = 0.0;
  for (std::size_t g = 0; g < 4; ++g) {
    const double k_j = w.K1[g] + w.K2[g] * mr;
    double a_j = 0.0;
    double t_pow = 1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double c_ji = w.C1[g][i] + w.C2[g][i] * mr + w.C3[g][i] * mr * mr;
      a_j += c_ji * t_pow;
      t_pow *= T / kWsggTref;
    }
    a_sum += a_j;
    eps += a_j * (1.0 - std::exp(-k_j * pL));
  }
  // a_0 = 1 - sum a_j belongs to the transparent gas (k_0 = 0, no
  // contribution); clamp the grey sum to the physical range.
  (void)a_sum;
  return std::clamp(eps, 0.0, 1.0);
}

}  // namespace

GasRadiation gas_emissivity(const EmissivityModel& model, double T_g,
                            double T_s, double P, const GasVec& C_g,
                            double S_m) {
  if (!(S_m > 0.0)) throw Error("gas_emissivity: path length must be > 0");
  double total = 0.0;
  for (double c : C_g) total += clamp0(c);
  const double x_co2 = total > 0.0 ? clamp0(C_g[idx(Gas::CO2)]) / total : 0.0;
  const double x_h2o = total > 0.0 ? clamp0(C_g[idx(Gas::H2O)]) / total : 0.0;
  const double P_m_bar = pa_to_bar(P) * (x_co2 + x_h2o);

  GasRadiation r;
  bool use_wsgg = model.mode == EmissivityModel::Mode::Wsgg;
  if (use_wsgg && !(x_co2 > 0.0)) {
    warn_once("WSGG emissivity: x_CO2 = 0, falling back to constant mode");
    use_wsgg = false;
  }
  if (use_wsgg) {
    const WsggCoefficients& w = *model.wsgg;
    r.eps_g = wsgg_emissivity(w, T_g, S_m, pa_to_bar(P), x_h2o, x_co2);
    const double eps_at_ts =
        wsgg_emissivity(w, T_s, S_m, pa_to_bar(P), x_h2o, x_co2);
    r.alpha_g = eps_at_ts * P_m_bar * S_m * std::sqrt(T_s / T_g);
  } else {
    r.eps_g = model.constant_eps_g;
    r.alpha_g = model.constant_eps_g * P_m_bar * S_m * std::sqrt(T_s / T_g);
  }
  return r;
}

double mixture_emissivity(double eps_s, double eps_g) {
  return eps_s + eps_g - eps_s * eps_g;
}

// --- Energy <-> temperature ---------------------------------------------------

double energy_from_temperature(const CompoundTable& table, PhaseKind kind,
                               double T, const SolidVec& C_s,
                               const GasVec& C_g) {
  switch (kind) {
    case PhaseKind::Solid:
      return enthalpy_solid(table, T, C_s);
    case PhaseKind::Gas: {
      double c_g = 0.0;
      for (double c : C_g) c_g += clamp0(c);
      return enthalpy_gas(table, T, C_g) - c_g * kGasConstant * T;
    }
    case PhaseKind::Mixture: {
      double c_g = 0.0;
      for (double c : C_g) c_g += clamp0(c);
      return enthalpy_solid(table, T, C_s) + enthalpy_gas(table, T, C_g) -
             c_g * kGasConstant * T;
    }
    default:
      throw Error("energy_from_temperature: lining phases use LiningMaterial");
  }
}

double temperature_from_energy(const CompoundTable& table, PhaseKind kind,
                               double U_hat, const SolidVec& C_s,
                               const GasVec& C_g, double T_guess) {
  const double tol = 1e-8 * std::abs(U_hat) + 1e-6;
  auto f = [&](double T) {
    return energy_from_temperature(table, kind, T, C_s, C_g) - U_hat;
  };
  auto df = [&](double T) {
    double c = heat_capacity(table, T, C_s, false) * (kind != PhaseKind::Gas);
    if (kind != PhaseKind::Solid) {
      double c_g = 0.0;
      for (double cc : C_g) c_g += clamp0(cc);
      c += heat_capacity(table, T, C_g, true) - c_g * kGasConstant;
    }
    return c;
  };

  double lo = kTemperatureMin, hi = kTemperatureMax;
  const double f_lo = f(lo), f_hi = f(hi);
  if (f_lo > 0.0 || f_hi < 0.0)
    throw Error("temperature_from_energy: no bracket in [150, 3500] K "
                "(nonphysical state)");
  // Converge both the residual and the Newton step so the round trip holds
  // to 1e-8 relative in T even when formation enthalpies dominate U.
  double T = std::clamp(T_guess, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double r = f(T);
    (r > 0.0 ? hi : lo) = T;
    const double d = df(T);
    double T_next = d > 0.0 ? T - r / d : T;
    if (!(T_next > lo) || !(T_next < hi)) T_next = 0.5 * (lo + hi);
    if (std::abs(r) < tol && std::abs(T_next - T) < 1e-9 * T) return T_next;
    T = T_next;
  }
  return T;
}

}  // namespace pyro
