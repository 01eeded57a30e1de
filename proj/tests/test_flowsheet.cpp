#include <cmath>
#include <set>

#include "doctest.h"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/flowsheet.hpp"
#include "pyro/scenario.hpp"

using namespace pyro;

namespace {

std::shared_ptr<Flowsheet> default_plant() {
  static std::shared_ptr<Flowsheet> fs = ScenarioConfig::defaults().build();
  return fs;
}

}  // namespace

TEST_CASE("default plant assembles with the expected state size") {
  auto fs = default_plant();
  // 5 cyclones (20/4), 6 ducts with 3 segments (20/4 each), 10 kiln
  // segments (20/5), 5 cooler segments (19/3).
  CHECK(fs->n_x() == 5 * 20 + 6 * 3 * 20 + 10 * 20 + 5 * 19);
  CHECK(fs->n_z() == 5 * 4 + 6 * 3 * 4 + 10 * 5 + 5 * 3);
  CHECK(fs->n_x() + fs->n_z() == 912);
  CHECK(fs->layout().unit_index("kiln") == Flowsheet::kKiln);
}

TEST_CASE("connection area ratios reproduce the published table") {
  auto fs = default_plant();
  const double a_d_cy1 = fs->cyclones[0].geom.A_d;
  const double a_in_r2 = fs->risers[1].inlet_area();
  CHECK(a_d_cy1 / a_in_r2 ==
        doctest::Approx(kPi * 0.32 * 0.32 / (kPi * 2.45 * 2.45)));
  const double a_x_cy2 = fs->cyclones[1].geom.A_x;
  CHECK(a_x_cy2 == doctest::Approx(kPi * 2.43 * 2.43));
  const double a_out_r1 = fs->risers[0].outlet_area();
  CHECK(a_out_r1 / fs->cyclones[0].dims.A_in ==
        doctest::Approx(kPi * 1.72 * 1.72 / 10.95));
  // Kiln-cooler pair: clinker drop and secondary air return areas.
  CHECK(fs->kiln.end_area() == doctest::Approx(kPi * 1.98 * 1.98));
  CHECK(fs->cooler.geom.A_solids_in == doctest::Approx(12.0));
  CHECK(fs->cooler.roof_part_area(0) == doctest::Approx(12.1));
}

TEST_CASE("false air totals match the published column") {
  auto fs = default_plant();
  double total = 0.0;
  for (double v : fs->false_air_m3s) total += v;
  CHECK(total == doctest::Approx(0.92 + 0.90 + 0.44 + 0.44 + 0.44 + 0.45 +
                                 0.45 + 0.44 + 0.44 + 0.0 + 3.22 + 0.83));
  const MolarFeed fa = fs->false_air_feed(Flowsheet::kCa);
  double mol = 0.0;
  for (double v : fa.gases) mol += v;
  CHECK(mol == doctest::Approx(1e5 * 3.22 / (kGasConstant * 298.15)));
}

TEST_CASE("boundary feeds carry the scenario flows") {
  auto fs = default_plant();
  const CompoundTable& table = fs->shared.table;
  CHECK(fs->boundary.meal.mass_flow(table) == doctest::Approx(85.7));
  CHECK(fs->boundary.meal.solids[idx(Solid::SiO2)] * 0.06009 ==
        doctest::Approx(7.5 + 6.9 * 120.18 / 222.14).epsilon(1e-6));
  CHECK(fs->boundary.meal.solids[idx(Solid::Al2O3)] * 0.10196 ==
        doctest::Approx(0.1 + 6.9 * 101.96 / 222.14).epsilon(1e-6));
  CHECK(fs->boundary.kiln_fuel.gases[idx(Gas::Csus)] * 0.012011 ==
        doctest::Approx(1.98));
  double fan_mol = 0.0;
  for (const MolarFeed& fan : fs->boundary.fan_feeds)
    for (double v : fan.gases) fan_mol += v;
  CHECK(fan_mol == doctest::Approx(1e5 * 157.9 / (kGasConstant * 298.15)));
  double first = 0.0;
  for (double v : fs->boundary.fan_feeds[0].gases) first += v;
  CHECK(first / fan_mol == doctest::Approx(28.0 / 136.0));
}

TEST_CASE("global residual evaluates on the initial profiles") {
  auto fs = default_plant();
  for (const char* profile : {"ignition", "ambient"}) {
    CAPTURE(profile);
    Eigen::VectorXd x;
    apply_initial_profile(*fs, profile, &x);
    Eigen::VectorXd z = fs->consistent_z(x);
    Eigen::VectorXd f, g;
    EvalReport rep;
    fs->eval(x, z, &f, &g, &rep);
    CHECK(f.allFinite());
    CHECK(g.allFinite());
    CHECK(g.cwiseAbs().maxCoeff() < 1e-7);
    Eigen::VectorXd f2, g2;
    fs->eval(x, z, &f2, &g2);
    CHECK((f - f2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g - g2).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("area scaling preserves total molar flow across a connection") {
  Stream s;
  s.Ns[idx(Solid::CaCO3)] = 3.0;
  s.Ng[idx(Gas::N2)] = 7.0;
  s.Hs = 11.0;
  s.v = 2.0;
  const double A_out = 4.0, A_in = 2.5;
  const Stream scaled = s.scaled(A_out / A_in);
  CHECK(A_in * scaled.Ns[idx(Solid::CaCO3)] ==
        doctest::Approx(A_out * s.Ns[idx(Solid::CaCO3)]));
  CHECK(A_in * scaled.Ng[idx(Gas::N2)] ==
        doctest::Approx(A_out * s.Ng[idx(Gas::N2)]));
  CHECK(A_in * scaled.Hs == doctest::Approx(A_out * s.Hs));
  Stream in;
  in.add(s, A_out / A_in);
  CHECK(in.Ng[idx(Gas::N2)] == doctest::Approx(scaled.Ng[idx(Gas::N2)]));
}

TEST_CASE("element audit is exactly zero on a zero-flow plant") {
  ScenarioConfig cfg = ScenarioConfig::defaults();
  cfg.meal_kg_s.clear();
  cfg.calciner_fuel_kg_s.clear();
  cfg.kiln_fuel_kg_s.clear();
  for (auto& [k, v] : cfg.primary_air_kg_s) v = 0.0;
  cfg.cooler_air_total_m3_s = 0.0;
  cfg.P_out_bar = 1.0;  // match the quiescent internal pressure
  for (auto& v : cfg.plant.false_air_m3s) v = 0.0;
  auto fs = cfg.build();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(fs->n_x());
  // Quiescent inert gas everywhere so temperatures stay defined.
  const Layout& layout = fs->layout();
  for (int u = 0; u < layout.n_units(); ++u)
    for (int k = 0; k < layout.unit(u).n_segments; ++k) {
      SegState s;
      s.C_g[idx(Gas::N2)] = 1e5 / (kGasConstant * 298.15);
      const bool mixture = layout.unit(u).kind == UnitKind::Cyclone ||
                           layout.unit(u).kind == UnitKind::Duct;
      s.U[0] = energy_from_temperature(
          fs->shared.table, mixture ? PhaseKind::Mixture : PhaseKind::Solid,
          298.15, s.C_s, s.C_g);
      if (!mixture)
        s.U[1] = energy_from_temperature(fs->shared.table, PhaseKind::Gas,
                                         298.15, s.C_s, s.C_g);
      layout.pack_x(s, u, k, x.data());
    }
  // Exact algebraic state: equal temperature and pressure everywhere, so
  // every face pressure difference is identically zero.
  Eigen::VectorXd z(fs->n_z());
  for (int u = 0; u < layout.n_units(); ++u)
    for (int k = 0; k < layout.unit(u).n_segments; ++k) {
      SegState s = layout.unpack(x.data(), z.data(), u, k);
      for (int p = 0; p < kMaxPhases; ++p) s.T[p] = 298.15;
      s.P = 1e5;
      s.theta = 0.0;
      layout.pack_z(s, u, k, z.data());
    }
  const ElementAudit audit = fs->element_balance_audit(x, z);
  for (std::size_t e = 0; e < kNumElements; ++e) {
    CHECK(audit.in[e] == 0.0);
    CHECK(std::abs(audit.out[e]) < 1e-6);
    CHECK(std::abs(audit.imbalance[e]) < 1e-12);
  }
}

TEST_CASE("element and energy audits close in transient states") {
  auto fs = default_plant();
  Eigen::VectorXd x;
  apply_initial_profile(*fs, "ignition", &x);
  Eigen::VectorXd z = fs->consistent_z(x);
  const ElementAudit audit = fs->element_balance_audit(x, z);
  // The discrete balances telescope, so in - out - accumulation vanishes at
  // any state, not only at steady state. Argon exercises the inert path.
  for (std::size_t e = 0; e < kNumElements; ++e) {
    CAPTURE(kElementNames[e]);
    CHECK(std::abs(audit.relative_imbalance[e]) < 1e-9);
  }
  const double scale =
      std::max({std::abs(audit.energy_in), std::abs(audit.energy_out), 1.0});
  CHECK(std::abs(audit.energy_imbalance) / scale < 1e-9);
}

TEST_CASE("structural sparsity covers the true Jacobian") {
  auto fs = default_plant();
  Eigen::VectorXd x;
  apply_initial_profile(*fs, "ignition", &x);
  Eigen::VectorXd z = fs->consistent_z(x);

  const Layout& layout = fs->layout();
  const int nx = fs->n_x(), nz = fs->n_z();
  std::set<std::pair<int, int>> allowed(fs->block_pattern().begin(),
                                        fs->block_pattern().end());

  std::vector<int> col_block(nx + nz, -1);
  for (int u = 0, b = 0; u < layout.n_units(); ++u)
    for (int k = 0; k < layout.unit(u).n_segments; ++k, ++b) {
      const UnitKind kind = layout.unit(u).kind;
      for (int i = 0; i < layout.x_stride(kind); ++i)
        col_block[layout.x_offset(u, k) + i] = b;
      for (int i = 0; i < layout.z_stride(kind); ++i)
        col_block[nx + layout.z_offset(u, k) + i] = b;
    }

  Eigen::VectorXd f0, g0, fp, gp;
  fs->eval(x, z, &f0, &g0);

  // Probe several columns in every block (full probing is unnecessary).
  std::set<int> probe;
  for (int u = 0; u < layout.n_units(); ++u)
    for (int k = 0; k < layout.unit(u).n_segments; ++k) {
      probe.insert(layout.x_offset(u, k));
      probe.insert(layout.x_offset(u, k) + kNumSolids);
      probe.insert(layout.x_offset(u, k) + kNumSpecies);
      probe.insert(nx + layout.z_offset(u, k));
      probe.insert(nx + layout.z_offset(u, k) +
                   phase_count(layout.unit(u).kind));
    }

  Eigen::VectorXd xp = x, zp = z;
  for (int c : probe) {
    const double base = c < nx ? x(c) : z(c - nx);
    const double h = 1e-5 * std::max(std::abs(base), 1.0);
    if (c < nx)
      xp(c) += h;
    else
      zp(c - nx) += h;
    fs->eval(xp, zp, &fp, &gp);
    for (int r = 0; r < nx + nz; ++r) {
      const double d = r < nx ? fp(r) - f0(r) : gp(r - nx) - g0(r - nx);
      if (std::abs(d) > 1e-9 * (std::abs(h) + 1.0)) {
        const bool covered = allowed.count({col_block[r], col_block[c]}) > 0;
        if (!covered) {
          CAPTURE(c);
          CAPTURE(r);
        }
        CHECK(covered);
      }
    }
    if (c < nx)
      xp(c) = x(c);
    else
      zp(c - nx) = z(c - nx);
  }

  // A cyclone's wall energy only touches its own rows.
  const int cy3_Uw = layout.x_offset(2, 0) + kNumSpecies + 2;
  xp = x;
  zp = z;
  xp(cy3_Uw) += 1e-3 * std::abs(x(cy3_Uw)) + 1.0;
  fs->eval(xp, zp, &fp, &gp);
  for (int r = 0; r < nx; ++r)
    if (std::abs(fp(r) - f0(r)) > 1e-9)
      CHECK(col_block[r] == col_block[cy3_Uw]);
}

TEST_CASE("doubling boundary feeds scales the feed terms linearly") {
  ScenarioConfig cfg = ScenarioConfig::defaults();
  for (int i = 1; i <= 12; ++i)
    cfg.tuning_overrides["r" + std::to_string(i)] = 0.0;
  auto fs1 = cfg.build();

  Eigen::VectorXd x;
  apply_initial_profile(*fs1, "ignition", &x);
  Eigen::VectorXd z = fs1->consistent_z(x);
  Eigen::VectorXd f1, g1;
  fs1->eval(x, z, &f1, &g1);

  ScenarioConfig cfg2 = cfg;
  for (auto& [k, v] : cfg2.meal_kg_s) v *= 2.0;
  auto fs2 = cfg2.build();
  Eigen::VectorXd f2, g2;
  fs2->eval(x, z, &f2, &g2);

  ScenarioConfig cfg3 = cfg;
  for (auto& [k, v] : cfg3.meal_kg_s) v *= 3.0;
  auto fs3 = cfg3.build();
  Eigen::VectorXd f3, g3;
  fs3->eval(x, z, &f3, &g3);
  const Eigen::VectorXd d21 = f2 - f1, d31 = f3 - f1;
  CHECK((d31 - 2.0 * d21).cwiseAbs().maxCoeff() <=
        1e-8 * std::max(1.0, d21.cwiseAbs().maxCoeff()));
}
