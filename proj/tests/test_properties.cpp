#include <cmath>
#include <random>

#include "doctest.h"
#include "pyro/compounds.hpp"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/properties.hpp"

using namespace pyro;

namespace {

const CompoundTable& table() {
  static CompoundTable t = CompoundTable::builtin();
  return t;
}

// Independent quadrature oracle for the cp integral (composite Simpson).
double cp_integral_quadrature(std::size_t species, double T) {
  const int n = 20000;
  const double a = kReferenceT, b = T;
  const double h = (b - a) / n;
  double sum = cp_molar(table(), species, a) + cp_molar(table(), species, b);
  for (int i = 1; i < n; ++i)
    sum += (i % 2 ? 4.0 : 2.0) * cp_molar(table(), species, a + i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("cp polynomial reproduces table values") {
  CHECK(cp_molar(table(), flat(Gas::Ar), 500.0) == doctest::Approx(20.79));
  // Independent evaluation of the polynomial at 298 K for CO2:
  // 25.98 + 43.61e-3*298 - 1.49e-5*298^2 = 37.6526
  CHECK(cp_molar(table(), flat(Gas::CO2), 298.0) ==
        doctest::Approx(37.6526).epsilon(1e-6));
  CHECK_THROWS_AS(cp_molar(table(), 17, 300.0), Error);
}

TEST_CASE("cp positive over the working range for every species") {
  for (std::size_t s = 0; s < kNumSpecies; ++s)
    for (double T = 200.0; T <= 2600.0; T += 10.0)
      CHECK(cp_molar(table(), s, T) > 0.0);
}

TEST_CASE("heat capacity is additive in composition") {
  GasVec n{};
  n[idx(Gas::CO2)] = 2.0;
  n[idx(Gas::N2)] = 3.0;
  const double c = heat_capacity(table(), 700.0, n, true);
  const double expect = 2.0 * cp_molar(table(), flat(Gas::CO2), 700.0) +
                        3.0 * cp_molar(table(), flat(Gas::N2), 700.0);
  CHECK(c == doctest::Approx(expect).epsilon(1e-14));
  GasVec n2 = n;
  for (double& v : n2) v *= 2.0;
  CHECK(heat_capacity(table(), 700.0, n2, true) ==
        doctest::Approx(2.0 * c).epsilon(1e-14));
}

TEST_CASE("formation enthalpies returned exactly at the reference state") {
  SolidVec n{};
  n[idx(Solid::CaCO3)] = 1.0;
  CHECK(enthalpy_solid(table(), kReferenceT, n) == doctest::Approx(-1207.6e3));
  GasVec g{};
  g[idx(Gas::CO2)] = 1.0;
  CHECK(enthalpy_gas(table(), kReferenceT, g) == doctest::Approx(-393.5e3));
  CHECK(enthalpy_solid(table(), 1234.5, SolidVec{}) == 0.0);
  CHECK(enthalpy_gas(table(), 1234.5, GasVec{}) == 0.0);
}

TEST_CASE("enthalpy integral matches a quadrature oracle") {
  // 1 mol Ar from 298.15 K to 1000 K: constant cp, 20.79*(1000-298.15).
  GasVec g{};
  g[idx(Gas::Ar)] = 1.0;
  const double dH =
      enthalpy_gas(table(), 1000.0, g) - enthalpy_gas(table(), kReferenceT, g);
  CHECK(dH == doctest::Approx(20.79 * (1000.0 - kReferenceT)).epsilon(1e-12));
  CHECK(dH == doctest::Approx(14591.46).epsilon(1e-4));

  for (std::size_t s : {flat(Solid::CaCO3), flat(Gas::CO2), flat(Gas::H2O)}) {
    const double analytic = table().species(s).cp.integral_from_ref(1500.0);
    CHECK(analytic ==
          doctest::Approx(cp_integral_quadrature(s, 1500.0)).epsilon(1e-9));
  }
  // Below the 200 K clamp the integrand continues with cp(200).
  const double lowT = table().species(flat(Gas::N2)).cp.integral_from_ref(170.0);
  const double at200 = table().species(flat(Gas::N2)).cp.integral_from_ref(200.0);
  const double cp200 = cp_molar(table(), flat(Gas::N2), 200.0);
  CHECK(lowT == doctest::Approx(at200 - 30.0 * cp200).epsilon(1e-12));
}

TEST_CASE("dH/dT equals the heat capacity (central differences)") {
  GasVec g{};
  g[idx(Gas::CO2)] = 1.5;
  g[idx(Gas::H2O)] = 0.5;
  SolidVec s{};
  s[idx(Solid::CaCO3)] = 2.0;
  s[idx(Solid::C2S)] = 1.0;
  for (double T : {320.0, 800.0, 1400.0, 2200.0}) {
    const double h = 1e-3 * T;
    const double dHg =
        (enthalpy_gas(table(), T + h, g) - enthalpy_gas(table(), T - h, g)) /
        (2.0 * h);
    CHECK(dHg ==
          doctest::Approx(heat_capacity(table(), T, g, true)).epsilon(1e-6));
    const double dHs = (enthalpy_solid(table(), T + h, s) -
                        enthalpy_solid(table(), T - h, s)) /
                       (2.0 * h);
    CHECK(dHs ==
          doctest::Approx(heat_capacity(table(), T, s, false)).epsilon(1e-6));
  }
}

TEST_CASE("enthalpy and volume are homogeneous of degree 1") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    SolidVec s{};
    GasVec g{};
    for (double& v : s) v = u(rng);
    for (double& v : g) v = u(rng);
    const double lambda = u(rng) + 0.1;
    SolidVec s2 = s;
    GasVec g2 = g;
    for (double& v : s2) v *= lambda;
    for (double& v : g2) v *= lambda;
    const double T = 300.0 + 400.0 * u(rng);
    CHECK(enthalpy_solid(table(), T, s2) ==
          doctest::Approx(lambda * enthalpy_solid(table(), T, s))
              .epsilon(1e-12));
    CHECK(volume_gas(T, 1e5, g2) ==
          doctest::Approx(lambda * volume_gas(T, 1e5, g)).epsilon(1e-12));
    CHECK(volume_solid(table(), s2) ==
          doctest::Approx(lambda * volume_solid(table(), s)).epsilon(1e-12));
  }
}

TEST_CASE("phase volumes") {
  GasVec g{};
  g[idx(Gas::N2)] = 1.0;
  CHECK(volume_gas(273.15, 101325.0, g) ==
        doctest::Approx(0.022414).epsilon(1e-4));
  SolidVec s{};
  s[idx(Solid::CaCO3)] = 1.0;
  CHECK(volume_solid(table(), s) ==
        doctest::Approx(100.09e-3 / 2710.0).epsilon(1e-12));
  CHECK(volume_solid(table(), s) * 1e6 == doctest::Approx(36.93).epsilon(1e-3));
}

TEST_CASE("densities close on single species and porosity limits") {
  const CompoundRecord& r = table().species(idx(Solid::CaCO3));
  SolidVec C{};
  C[idx(Solid::CaCO3)] = r.solid_density / r.molar_mass;  // fills 1 m3/m3
  const double V_hat = volume_solid(table(), C);
  CHECK(V_hat == doctest::Approx(1.0).epsilon(1e-12));
  const Densities d = densities(table(), C, false, V_hat, 0.0);
  CHECK(d.particle == doctest::Approx(r.solid_density).epsilon(1e-12));
  CHECK(d.bulk == doctest::Approx(d.particle).epsilon(1e-12));
  const Densities d4 = densities(table(), C, false, V_hat, 0.4);
  CHECK(d4.bulk == doctest::Approx(0.6 * d.particle).epsilon(1e-12));
  CHECK_THROWS_AS(densities(table(), C, false, 0.0, 0.0), Error);
  CHECK_THROWS_AS(densities(table(), C, false, V_hat, 1.0), Error);
}

TEST_CASE("Sutherland viscosity reproduces both anchors") {
  for (Gas g : {Gas::CO2, Gas::N2, Gas::O2, Gas::Ar, Gas::CO, Gas::H2}) {
    const CompoundRecord& r = table().gas(g);
    CHECK(pure_gas_viscosity(table(), g, r.mu_anchor_lo->T) ==
          doctest::Approx(r.mu_anchor_lo->value).epsilon(1e-12));
    CHECK(pure_gas_viscosity(table(), g, r.mu_anchor_hi->T) ==
          doctest::Approx(r.mu_anchor_hi->value).epsilon(1e-12));
  }
  CHECK(pure_gas_viscosity(table(), Gas::N2, 300.0) * 1e6 ==
        doctest::Approx(17.89));
  CHECK(pure_gas_viscosity(table(), Gas::N2, 1000.0) * 1e6 ==
        doctest::Approx(41.54));
  // Two-point solve oracle: S = (T_hi q - T_lo)/(1 - q),
  // q = (mu_hi/mu_lo)/(T_hi/T_lo)^1.5.
  const double q = (41.54 / 17.89) / std::pow(1000.0 / 300.0, 1.5);
  const double S = (1000.0 * q - 300.0) / (1.0 - q);
  CHECK(table().gas(Gas::N2).sutherland_S == doctest::Approx(S).epsilon(1e-12));
  CHECK(S == doctest::Approx(131.8).epsilon(1e-3));
  // H2O: the single 1000 K anchor with configured S.
  CHECK(pure_gas_viscosity(table(), Gas::H2O, 1000.0) * 1e6 ==
        doctest::Approx(37.615).epsilon(1e-12));
  CHECK(table().gas(Gas::H2O).sutherland_S == doctest::Approx(961.0));
  CHECK_THROWS_AS(pure_gas_viscosity(table(), Gas::Csus, 400.0), Error);
}

TEST_CASE("Wilke mixture viscosity") {
  GasVec pure{};
  pure[idx(Gas::N2)] = 3.0;
  CHECK(gas_viscosity(table(), 700.0, pure) ==
        doctest::Approx(pure_gas_viscosity(table(), Gas::N2, 700.0))
            .epsilon(1e-12));
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    GasVec mix{};
    mix[idx(Gas::N2)] = x;
    mix[idx(Gas::O2)] = 1.0 - x;
    const double mu = gas_viscosity(table(), 600.0, mix);
    const double mu1 = pure_gas_viscosity(table(), Gas::N2, 600.0);
    const double mu2 = pure_gas_viscosity(table(), Gas::O2, 600.0);
    CHECK(mu > std::min(mu1, mu2));
    CHECK(mu < std::max(mu1, mu2));
  }
  // phi_ij cross-relation against direct formula evaluation for (N2, O2).
  const double muN2 = pure_gas_viscosity(table(), Gas::N2, 300.0);
  const double muO2 = pure_gas_viscosity(table(), Gas::O2, 300.0);
  const double M_N2 = 28.014e-3, M_O2 = 31.998e-3;
  auto phi = [](double mu_i, double mu_j, double M_i, double M_j) {
    const double num = 1.0 + std::sqrt(mu_i / mu_j) * std::pow(M_j / M_i, 0.25);
    return num * num / (std::sqrt(8.0) * std::sqrt(1.0 + M_i / M_j));
  };
  const double pij = phi(muN2, muO2, M_N2, M_O2);
  const double pji = phi(muO2, muN2, M_O2, M_N2);
  CHECK(pij * pji > 0.9);
  CHECK(pij * pji < 1.1);
  // Csus is excluded from mixing: adding it must not change the result.
  GasVec with_c = pure;
  with_c[idx(Gas::Csus)] = 5.0;
  CHECK(gas_viscosity(table(), 700.0, with_c) ==
        doctest::Approx(gas_viscosity(table(), 700.0, pure)).epsilon(1e-12));
}

TEST_CASE("Einstein suspension viscosity") {
  GasVec g{};
  g[idx(Gas::N2)] = 10.0;
  const double mu_g = gas_viscosity(table(), 500.0, g);
  CHECK(mixture_viscosity(table(), 500.0, g, 0.0) ==
        doctest::Approx(mu_g).epsilon(1e-12));
  CHECK(mixture_viscosity(table(), 500.0, g, 0.2) / mu_g ==
        doctest::Approx(1.1 / 0.6).epsilon(1e-12));
  CHECK_THROWS_AS(mixture_viscosity(table(), 500.0, g, 0.5), Error);
}

TEST_CASE("conductivities") {
  CHECK(pure_gas_conductivity(table(), Gas::Ar, 300.0) * 1e3 ==
        doctest::Approx(17.84));
  CHECK(pure_gas_conductivity(table(), Gas::CO, 600.0) * 1e3 ==
        doctest::Approx(43.2));
  // H2O design line: k(T) = 95.877 (T/1000) mW/(K m).
  CHECK(pure_gas_conductivity(table(), Gas::H2O, 500.0) * 1e3 ==
        doctest::Approx(95.877 * 0.5).epsilon(1e-9));

  SolidVec s{};
  s[idx(Solid::CaO)] = 2.0;
  CHECK(solid_conductivity(table(), s) ==
        doctest::Approx(table().species(idx(Solid::CaO)).solid_conductivity));
  CHECK_THROWS_AS(solid_conductivity(table(), SolidVec{}), Error);

  // Two equal-volume layers: harmonic mean oracle 2/(1/k1 + 1/k2).
  const CompoundRecord& a = table().species(idx(Solid::CaCO3));
  const CompoundRecord& b = table().species(idx(Solid::C3A));
  SolidVec two{};
  two[idx(Solid::CaCO3)] = a.solid_density / a.molar_mass;
  two[idx(Solid::C3A)] = b.solid_density / b.molar_mass;
  const double expect =
      2.0 / (1.0 / a.solid_conductivity + 1.0 / b.solid_conductivity);
  CHECK(solid_conductivity(table(), two) ==
        doctest::Approx(expect).epsilon(1e-12));

  GasVec mix{};
  mix[idx(Gas::N2)] = 0.4;
  mix[idx(Gas::CO2)] = 0.6;
  const double km = gas_conductivity(table(), 600.0, mix);
  const double k1 = pure_gas_conductivity(table(), Gas::N2, 600.0);
  const double k2 = pure_gas_conductivity(table(), Gas::CO2, 600.0);
  CHECK(km > std::min(k1, k2));
  CHECK(km < std::max(k1, k2));
}

TEST_CASE("emissivities") {
  EmissivityModel constant;
  GasVec g{};
  g[idx(Gas::CO2)] = 5.0;
  g[idx(Gas::N2)] = 15.0;
  const GasRadiation r = gas_emissivity(constant, 1200.0, 1000.0, 1e5, g, 2.0);
  CHECK(r.eps_g == doctest::Approx(0.30));
  CHECK(mixture_emissivity(0.9, 0.3) == doctest::Approx(0.93));
  // alpha_g = eps_g(T_s) P_m S_m sqrt(T_s/T_g), P_m in bar.
  const double P_m = 1.0 * (5.0 / 20.0);
  CHECK(r.alpha_g ==
        doctest::Approx(0.30 * P_m * 2.0 * std::sqrt(1000.0 / 1200.0)));
}

TEST_CASE("energy-temperature round trip and monotonicity") {
  SolidVec s{};
  s[idx(Solid::CaCO3)] = 500.0;
  s[idx(Solid::SiO2)] = 100.0;
  GasVec g{};
  g[idx(Gas::CO2)] = 8.0;
  g[idx(Gas::N2)] = 14.0;
  g[idx(Gas::O2)] = 1.0;
  g[idx(Gas::H2O)] = 0.5;
  for (PhaseKind kind :
       {PhaseKind::Solid, PhaseKind::Gas, PhaseKind::Mixture}) {
    for (double T = 250.0; T <= 2600.0; T += 117.0) {
      const double U = energy_from_temperature(table(), kind, T, s, g);
      const double T2 = temperature_from_energy(table(), kind, U, s, g, 900.0);
      CHECK(T2 == doctest::Approx(T).epsilon(1e-8));
    }
    const double U1 = energy_from_temperature(table(), kind, 1000.0, s, g);
    const double U2 = energy_from_temperature(table(), kind, 1001.0, s, g);
    CHECK(U2 > U1);
  }
  // Pure 1 mol/m3 Ar gas at fixed P: dU/dT = cp - R = 12.476 J/(m3 K).
  GasVec ar{};
  ar[idx(Gas::Ar)] = 1.0;
  const double h = 0.5;
  const double dU =
      (energy_from_temperature(table(), PhaseKind::Gas, 1000.0 + h, SolidVec{},
                               ar) -
       energy_from_temperature(table(), PhaseKind::Gas, 1000.0 - h, SolidVec{},
                               ar)) /
      (2.0 * h);
  CHECK(dU == doctest::Approx(20.79 - kGasConstant).epsilon(1e-9));
  CHECK(dU == doctest::Approx(12.476).epsilon(1e-4));
  CHECK_THROWS_AS(
      temperature_from_energy(table(), PhaseKind::Gas, 1e12, SolidVec{}, ar),
      Error);
}

TEST_CASE("lining material enthalpy inverts") {
  LiningMaterial brick{2.0, 2600.0, 960.0};
  const double U = brick.enthalpy_density(1100.0);
  CHECK(brick.temperature(U) == doctest::Approx(1100.0).epsilon(1e-12));
}

TEST_CASE("compound table round-trips through the data file") {
  const CompoundTable& t = table();
  t.save("compounds_roundtrip.csv");
  const CompoundTable t2 = CompoundTable::load("compounds_roundtrip.csv");
  for (std::size_t i = 0; i < kNumSpecies; ++i) {
    CHECK(t2.species(i).name == t.species(i).name);
    CHECK(t2.species(i).molar_mass ==
          doctest::Approx(t.species(i).molar_mass).epsilon(1e-12));
    CHECK(t2.species(i).formation_enthalpy ==
          doctest::Approx(t.species(i).formation_enthalpy).epsilon(1e-12));
    CHECK(t2.species(i).cp.value(777.0) ==
          doctest::Approx(t.species(i).cp.value(777.0)).epsilon(1e-12));
    CHECK(t2.species(i).sutherland_S ==
          doctest::Approx(t.species(i).sutherland_S).epsilon(1e-9));
  }
}
