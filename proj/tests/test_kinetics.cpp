#include <cmath>
#include <random>

#include "doctest.h"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/kinetics.hpp"
#include "pyro/properties.hpp"

using namespace pyro;

namespace {
const CompoundTable& table() {
  static CompoundTable t = CompoundTable::builtin();
  return t;
}
const ReactionSet& rxns() {
  static ReactionSet r = ReactionSet::builtin();
  return r;
}
}  // namespace

TEST_CASE("stoichiometric matrix conserves every element (integer)") {
  const auto& nu = rxns().nu();
  for (std::size_t r = 0; r < kNumReactions; ++r)
    for (std::size_t e = 0; e < kNumElements; ++e) {
      long sum = 0;
      for (std::size_t s = 0; s < kNumSpecies; ++s)
        sum += static_cast<long>(kElementMatrix[e][s]) * nu[r][s];
      CHECK(sum == 0);
    }
}

TEST_CASE("rate constant") {
  RateLaw law;
  law.k_r = 3.5;
  law.n = 0.0;
  law.E_A = 0.0;
  law.tuning_scale = 2.0;
  for (double T : {300.0, 900.0, 2000.0})
    CHECK(rate_constant(law, T) == doctest::Approx(7.0));

  // r10 base law at 1000 K: 7.0e4 exp(-66510/(R 1000)) ~ 23.5.
  RateLaw r10;
  r10.k_r = 7.0e4;
  r10.E_A = 66.51e3;
  const double k = rate_constant(r10, 1000.0);
  CHECK(k == doctest::Approx(7.0e4 * std::exp(-66510.0 / (kGasConstant * 1000.0)))
                 .epsilon(1e-12));
  CHECK(k == doctest::Approx(23.5).epsilon(2e-2));

  // Monotone in T for n >= 0.
  RateLaw mono;
  mono.k_r = 1.0;
  mono.n = 0.51;
  mono.E_A = 1e5;
  double prev = 0.0;
  for (double T = 300.0; T < 2500.0; T += 50.0) {
    const double v = rate_constant(mono, T);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("reaction rates vanish with missing reactants") {
  const auto r0 = reaction_rates(rxns(), table(), 1200.0, 1e5, SolidVec{},
                                 GasVec{});
  for (double v : r0) CHECK(v == 0.0);

  // r1 with only CaCO3 present is independent of gas composition.
  SolidVec s{};
  s[idx(Solid::CaCO3)] = 100.0;
  GasVec g1{}, g2{};
  g1[idx(Gas::N2)] = 10.0;
  g2[idx(Gas::CO2)] = 3.0;
  g2[idx(Gas::O2)] = 8.0;
  const auto ra = reaction_rates(rxns(), table(), 1100.0, 1e5, s, g1);
  const auto rb = reaction_rates(rxns(), table(), 1100.0, 1e5, s, g2);
  CHECK(ra[0] == doctest::Approx(rb[0]).epsilon(1e-14));
  CHECK(ra[0] > 0.0);

  // Nonnegative rates for nonnegative inputs (random probe).
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int t = 0; t < 10; ++t) {
    SolidVec ss{};
    GasVec gg{};
    for (double& v : ss) v = u(rng);
    for (double& v : gg) v = u(rng);
    const auto r = reaction_rates(rxns(), table(), 900.0 + 100.0 * t, 1e5, ss, gg);
    for (double v : r) CHECK(v >= 0.0);
  }
}

TEST_CASE("r11 scalar evaluation oracle") {
  // C_CO = C_H2O = 1 mol/m3 = 1e-3 mol/L at 1200 K; base tuning 1.
  ReactionSet set = ReactionSet::builtin();
  auto tuning = set.tuning();
  tuning.fill(1.0);
  set.set_tuning(tuning);
  SolidVec s{};
  GasVec g{};
  g[idx(Gas::CO)] = 1.0;
  g[idx(Gas::H2O)] = 1.0;
  const auto r = reaction_rates(set, table(), 1200.0, 12345.0, s, g);
  const double k = 2.75e6 * std::exp(-83680.0 / (kGasConstant * 1200.0));
  CHECK(r[10] == doctest::Approx(k * 1e-6).epsilon(1e-12));
}

TEST_CASE("r1 unit reconciliation divides by the molar mass of CaCO3") {
  ReactionSet set = ReactionSet::builtin();
  auto tuning = set.tuning();
  tuning.fill(1.0);
  set.set_tuning(tuning);
  SolidVec s{};
  s[idx(Solid::CaCO3)] = 1000.0;  // 1 mol/L
  const auto r = reaction_rates(set, table(), 1100.0, 1e5, s, GasVec{});
  const double k = 1e8 * std::exp(-175700.0 / (kGasConstant * 1100.0));
  CHECK(r[0] == doctest::Approx(k * 1.0 / 0.10009).epsilon(1e-10));
}

TEST_CASE("production rates follow nu^T r") {
  // Unit rate on reaction #1.
  std::array<double, kNumReactions> r{};
  r[0] = 1.0;
  const ProductionRates R = production_rates(rxns(), r);
  CHECK(R.solids[idx(Solid::CaCO3)] == doctest::Approx(-1.0));
  CHECK(R.solids[idx(Solid::CaO)] == doctest::Approx(1.0));
  CHECK(R.gases[idx(Gas::CO2)] == doctest::Approx(1.0));
  double other = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i)
    if (i != idx(Solid::CaCO3) && i != idx(Solid::CaO))
      other += std::abs(R.solids[i]);
  for (std::size_t i = 0; i < kNumGases; ++i)
    if (i != idx(Gas::CO2)) other += std::abs(R.gases[i]);
  CHECK(other == 0.0);

  const ProductionRates zero = production_rates(rxns(), {});
  for (double v : zero.solids) CHECK(v == 0.0);
  for (double v : zero.gases) CHECK(v == 0.0);
}

TEST_CASE("production rates match a brute-force accumulation oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 5.0);
  for (int t = 0; t < 25; ++t) {
    std::array<double, kNumReactions> r{};
    for (double& v : r) v = u(rng);
    const ProductionRates R = production_rates(rxns(), r);
    // Oracle: accumulate per reaction, species by species.
    std::array<double, kNumSpecies> acc{};
    for (std::size_t j = 0; j < kNumReactions; ++j)
      for (std::size_t sidx = 0; sidx < kNumSpecies; ++sidx)
        acc[sidx] += rxns().nu()[j][sidx] * r[j];
    for (std::size_t i = 0; i < kNumSolids; ++i)
      CHECK(R.solids[i] == doctest::Approx(acc[i]).epsilon(1e-13));
    for (std::size_t i = 0; i < kNumGases; ++i)
      CHECK(R.gases[i] == doctest::Approx(acc[kNumSolids + i]).epsilon(1e-13));
    // Element conservation under the production map.
    for (std::size_t e = 0; e < kNumElements; ++e) {
      double sum = 0.0;
      for (std::size_t i = 0; i < kNumSolids; ++i)
        sum += kElementMatrix[e][i] * R.solids[i];
      for (std::size_t i = 0; i < kNumGases; ++i)
        sum += kElementMatrix[e][kNumSolids + i] * R.gases[i];
      CHECK(sum == doctest::Approx(0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("calcination heat term") {
  CHECK(calcination_heat(table(), 800.0, 1e5, 0.0) == 0.0);
  // r1 = 1 mol/(m3 s) at the reference temperature: the CO2 formation
  // enthalpy, -393.5 kW/m3.
  CHECK(calcination_heat(table(), kReferenceT, 1e5, 1.0) ==
        doctest::Approx(-393.5e3));
  const double one = calcination_heat(table(), 1100.0, 1e5, 1.0);
  CHECK(calcination_heat(table(), 1100.0, 1e5, 3.5) ==
        doctest::Approx(3.5 * one).epsilon(1e-13));
}

TEST_CASE("default tuning matches the scenario report") {
  const auto t = rxns().tuning();
  CHECK(t[0] == 170.0);
  CHECK(t[1] == 2e5);
  CHECK(t[2] == 6e6);
  CHECK(t[3] == 5e6);
  CHECK(t[4] == 5e10);
  CHECK(t[5] == 1.0);
  CHECK(t[6] == 5e5);
  CHECK(t[9] == 60.0);
}

TEST_CASE("spang profile replaces the clinker rows") {
  const ReactionSet spang = ReactionSet::builtin("spang");
  CHECK(spang.laws()[0].k_r == doctest::Approx(1.64e35));
  CHECK(spang.laws()[0].E_A == doctest::Approx(804.8e3));
  CHECK(spang.laws()[0].tuning_scale == 1.0);
  // Fuel rows unchanged.
  CHECK(spang.laws()[9].k_r == doctest::Approx(7.0e4));
  CHECK_THROWS_AS(ReactionSet::builtin("bogus"), Error);
}

TEST_CASE("reaction set round-trips through the data file") {
  rxns().save("reactions_roundtrip.csv");
  const ReactionSet r2 = ReactionSet::load("reactions_roundtrip.csv");
  for (std::size_t j = 0; j < kNumReactions; ++j) {
    CHECK(r2.laws()[j].k_r == doctest::Approx(rxns().laws()[j].k_r));
    CHECK(r2.laws()[j].E_A == doctest::Approx(rxns().laws()[j].E_A));
    CHECK(r2.laws()[j].tuning_scale ==
          doctest::Approx(rxns().laws()[j].tuning_scale));
    CHECK(r2.laws()[j].alpha == rxns().laws()[j].alpha);
  }
}
