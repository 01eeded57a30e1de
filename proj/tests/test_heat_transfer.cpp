#include <cmath>

#include "doctest.h"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/heat_transfer.hpp"

using namespace pyro;

TEST_CASE("conductance series") {
  // Single film leg.
  CHECK(conductance_series({ConductanceLeg::film(2.0, 50.0)}) ==
        doctest::Approx(100.0));
  // Two equal film legs halve the total.
  CHECK(conductance_series({ConductanceLeg::film(2.0, 50.0),
                            ConductanceLeg::film(2.0, 50.0)}) ==
        doctest::Approx(50.0));
  // Film + barrier against an explicit resistance-sum oracle.
  const double r_oracle = 1.0 / (3.0 * 20.0) + 0.05 / (1.5 * 4.0);
  CHECK(conductance_series({ConductanceLeg::film(3.0, 20.0),
                            ConductanceLeg::barrier(4.0, 0.05, 1.5)}) ==
        doctest::Approx(1.0 / r_oracle).epsilon(1e-12));
  CHECK_THROWS_AS(conductance_series({}), Error);
  // Conductance decreases when any series resistance increases.
  const double base = conductance_series({ConductanceLeg::film(3.0, 20.0),
                                          ConductanceLeg::barrier(4.0, 0.05, 1.5)});
  const double thicker = conductance_series(
      {ConductanceLeg::film(3.0, 20.0), ConductanceLeg::barrier(4.0, 0.08, 1.5)});
  CHECK(thicker < base);
}

TEST_CASE("curved wall depth") {
  CHECK(curved_depth(3.45, 3.52) == doctest::Approx(std::log(3.52 / 3.45) * 3.45));
}

TEST_CASE("Gupta cyclone Nusselt number") {
  CycloneBetaInput in;
  in.v_in = 14.0;
  in.u_mf = 0.16;
  in.d_p = 20e-6;
  in.rho_g = 0.6;
  in.mu_g = 3e-5;
  in.r_c = 3.45;
  in.D_H = 4.0 * 538.0 / 1200.0;
  in.k_m = 0.05;
  in.k_g = 0.05;

  // Zero loading: only the swirl term remains.
  in.rho_s = 0.0;
  in.dP_c = 500.0;
  const double Re = in.rho_g * in.v_in * 2.0 * in.r_c / in.mu_g;
  const double swirl = in.v_in / in.u_mf * (2.0 * in.r_c / in.d_p) * Re;
  const double Nu0 = 702.8 + 9.5e-8 * swirl;
  CHECK(beta_cyclone(in) == doctest::Approx(in.k_m / in.D_H * Nu0).epsilon(1e-12));

  // Loaded chamber: hand-evaluated oracle.
  in.rho_s = 0.9;
  in.c_s = 0.9 * 800.0;  // volumetric, J/(m3 K)
  in.c_g = 0.6 * 1100.0;
  in.k_s = 2.0;
  const double euler = in.dP_c / (0.5 * in.rho_g * in.v_in * in.v_in);
  const double loading = (0.03 + 1.2e-13 * swirl) * (in.rho_s / in.rho_g) *
                         ((in.c_s / in.rho_s) / (in.c_g / in.rho_g)) *
                         (in.k_s / in.k_g) * euler;
  CHECK(beta_cyclone(in) ==
        doctest::Approx(in.k_m / in.D_H * (Nu0 + loading)).epsilon(1e-12));

  // Monotone in the pressure drop.
  CycloneBetaInput hi = in;
  hi.dP_c = 1000.0;
  CHECK(beta_cyclone(hi) > beta_cyclone(in));

  CycloneBetaInput bad = in;
  bad.rho_g = 0.0;
  CHECK_THROWS_AS(beta_cyclone(bad), Error);
}

TEST_CASE("Gnielinski duct correlation") {
  // Scalar oracle at Re = 1e4, Pr = 0.7.
  const double f = std::pow(0.79 * std::log(1e4) - 1.64, -2.0);
  CHECK(f == doctest::Approx(0.0314786).epsilon(1e-4));
  const double Nu = (f / 8.0) * 9000.0 * 0.7 /
                    (1.0 + 12.7 * std::sqrt(f / 8.0) *
                               (std::pow(0.7, 2.0 / 3.0) - 1.0));
  CHECK(beta_duct(1e4, 0.7, 0.04, 2.0) ==
        doctest::Approx(0.04 * Nu / 2.0).epsilon(1e-12));
  CHECK(Nu == doctest::Approx(29.82).epsilon(1e-3));

  // Pr = 1 collapses the denominator correction.
  const double Nu1 = (f / 8.0) * 9000.0;
  CHECK(beta_duct(1e4, 1.0, 1.0, 1.0) == doctest::Approx(Nu1).epsilon(1e-12));

  CHECK_THROWS_AS(beta_duct(900.0, 0.7, 0.04, 2.0), Error);
}

TEST_CASE("Tscheng kiln correlations") {
  KilnBetaInput in;
  in.theta = 1.6;
  in.r_c = 1.98;
  in.omega = rpm_to_rad_s(4.0);
  in.v_g = -9.0;
  in.rho_g = 0.18;
  in.mu_g = 4.5e-5;
  in.k_g = 0.09;
  in.k_s = 2.0;
  in.c_s_volumetric = 3.4e5;
  in.beta_gs_factor = 3.0;

  const KilnBetas b = betas_kiln(in);
  // Scalar oracle for beta_rs.
  const double l_r = in.r_c * in.theta;
  const double alpha_B = in.k_s / in.c_s_volumetric;
  const double rs = 11.6 * in.k_s / l_r *
                    std::pow(in.omega * in.r_c * in.r_c * in.theta / alpha_B, 0.3);
  CHECK(b.rs == doctest::Approx(rs).epsilon(1e-12));
  CHECK(b.gs > 0.0);
  CHECK(b.gr > 0.0);

  // Effective diameter limit at theta = 0 is the full bore.
  KilnBetaInput empty = in;
  empty.theta = 0.0;
  const KilnBetas be = betas_kiln(empty);
  CHECK(be.D_e == doctest::Approx(2.0 * in.r_c).epsilon(1e-12));
  CHECK(be.rs == 0.0);

  // omega = 0: Re_omega floored, beta_gr stays finite.
  KilnBetaInput still = in;
  still.omega = 0.0;
  CHECK(std::isfinite(betas_kiln(still).gr));
  CHECK(betas_kiln(still).rs == 0.0);
}

TEST_CASE("cooler packed-bed coefficient") {
  // Re = 0: conduction limit Nu = 2.
  const double D_p = 0.04;
  const double b0 = beta_cooler(0.0, 0.7, 3.0, D_p);
  CHECK(b0 == doctest::Approx(3.0 * 2.0 / (D_p + 0.5 * 0.25 * D_p * 2.0)));
  // Nu oracle at Re = 100, Pr = 0.7: 2 + 1.8 * 0.8879 * 10 = 17.98.
  const double Nu = 2.0 + 1.8 * std::cbrt(0.7) * 10.0;
  CHECK(Nu == doctest::Approx(17.98).epsilon(1e-3));
  CHECK(beta_cooler(100.0, 0.7, 3.0, D_p) ==
        doctest::Approx(3.0 * Nu / (D_p + 0.5 * 0.25 * D_p * Nu)).epsilon(1e-12));
}

TEST_CASE("radiation pairs") {
  // Equal temperatures and emissivities cancel.
  CHECK(radiation_pair(5.0, 0.8, 1000.0, 0.8, 1000.0) == doctest::Approx(0.0));
  // Linear in area.
  const double q1 = radiation_pair(1.0, 0.9, 1200.0, 0.8, 900.0);
  CHECK(radiation_pair(2.0, 0.9, 1200.0, 0.8, 900.0) ==
        doctest::Approx(2.0 * q1).epsilon(1e-12));
  // Antisymmetric under swapping the two sides.
  CHECK(radiation_pair(1.0, 0.8, 900.0, 0.9, 1200.0) ==
        doctest::Approx(-q1).epsilon(1e-12));

  // Cyclone view-factor form.
  const double F = 1.0 / (1.0 / 0.9 + 1.0 / 0.85 - 1.0);
  const double q = radiation_cyclone(100.0, 1e-3, 0.9, 0.85, 1100.0, 900.0);
  CHECK(q == doctest::Approx(kStefanBoltzmann * 100.0 * 1e-3 * F *
                             (std::pow(1100.0, 4) - std::pow(900.0, 4)))
                 .epsilon(1e-12));
}

TEST_CASE("kiln radiation forms") {
  KilnRadiationInput in;
  in.A_gs = 14.0;
  in.A_gw = 50.0;
  in.A_ws = 16.0;
  in.eps_s = 0.9;
  in.eps_w = 0.85;
  in.eps_g = 0.3;
  in.alpha_gs = 0.25;
  in.alpha_gw = 0.25;
  in.T_g = 2000.0;
  in.T_s = 1500.0;
  in.T_w = 1400.0;
  in.L_c = 3.0;
  in.r_c = 1.98;
  in.tilt = deg_to_rad(2.0);
  const KilnRadiation q = radiation_kiln(in);
  auto p4 = [](double T) { return std::pow(T, 4); };
  // Scalar oracle for the ws term.
  const double omega_view = in.L_c / (2.0 * (kPi - in.tilt) * in.r_c);
  CHECK(q.ws == doctest::Approx(kStefanBoltzmann * in.A_ws * 0.85 * 0.9 *
                                omega_view * (p4(1400.0) - p4(1500.0)))
                    .epsilon(1e-12));
  CHECK(q.gs == doctest::Approx(kStefanBoltzmann * in.A_gs * 1.9 *
                                (0.3 * p4(2000.0) - 0.25 * p4(1500.0)) / 2.0)
                    .epsilon(1e-12));
  CHECK(q.gw > 0.0);
}

TEST_CASE("mean beam lengths") {
  CHECK(path_length_kiln(1.98, 0.5) == doctest::Approx(0.95 * (2.0 * 1.98 - 0.5)));
  CHECK(path_length_cooler(0.8) == doctest::Approx(0.4));
  CHECK(path_length_duct(kPi * 4.0) == doctest::Approx(2.0));
}
