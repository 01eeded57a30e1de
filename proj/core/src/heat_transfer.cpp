#include "pyro/heat_transfer.hpp"

#include <algorithm>
#include <cmath>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/warnings.hpp"

namespace pyro {

double curved_depth(double r_inner, double r_outer) {
  return std::log(r_outer / r_inner) * r_inner;
}

double conductance_series(const std::vector<ConductanceLeg>& legs) {
  if (legs.empty()) throw Error("conductance_series: no legs");
  double resistance = 0.0;
  for (const ConductanceLeg& leg : legs) {
    if (leg.kind == ConductanceLeg::Kind::Film) {
      if (!(leg.A > 0.0 && leg.beta > 0.0))
        throw Error("conductance_series: film leg needs A, beta > 0");
      resistance += 1.0 / (leg.A * leg.beta);
    } else {
      if (!(leg.A > 0.0 && leg.dx > 0.0 && leg.k > 0.0))
        throw Error("conductance_series: barrier leg needs A, dx, k > 0");
      resistance += leg.dx / (leg.k * leg.A);
    }
  }
  return 1.0 / resistance;
}

double beta_cyclone(const CycloneBetaInput& in) {
  if (!(in.rho_g > 0.0)) throw Error("beta_cyclone: zero gas density");
  const double Re = in.rho_g * in.v_in * 2.0 * in.r_c / in.mu_g;
  const double swirl = in.v_in / in.u_mf * (2.0 * in.r_c / in.d_p) * Re;
  double Nu = 702.8 + 9.5e-8 * swirl;
  if (in.rho_s > 0.0 && in.dP_c > 0.0) {
    const double euler = in.dP_c / (0.5 * in.rho_g * in.v_in * in.v_in);
    // Loading term with segment-density ratio and mass-specific heats.
    const double cs_over_cg =
        (in.c_s / in.rho_s) / (in.c_g / in.rho_g);
    Nu += (0.03 + 1.2e-13 * swirl) * (in.rho_s / in.rho_g) * cs_over_cg *
          (in.k_s / in.k_g) * euler;
  }
  return in.k_m / in.D_H * Nu;
}

double beta_duct(double Re_D, double Pr, double k_m, double D_H) {
  if (Re_D <= 1000.0)
    throw Error("beta_duct: Re_D <= 1000, Gnielinski correlation invalid");
  if (Re_D < 3000.0)
    warn_once("beta_duct: Re_D below 3000, Gnielinski correlation outside "
              "its stated validity");
  const double f = std::pow(0.79 * std::log(Re_D) - 1.64, -2.0);
  const double Nu = (f / 8.0) * (Re_D - 1000.0) * Pr /
                    (1.0 + 12.7 * std::sqrt(f / 8.0) *
                               (std::pow(Pr, 2.0 / 3.0) - 1.0));
  return k_m * Nu / D_H;
}

KilnBetas betas_kiln(const KilnBetaInput& in) {
  KilnBetas out;
  const double th = std::clamp(in.theta, 0.0, 2.0 * kPi - 1e-9);
  out.D_e = 2.0 * in.r_c * (kPi - 0.5 * th + 0.5 * std::sin(th)) /
            (kPi - 0.5 * th + std::sin(0.5 * th));
  const double Re_D = in.rho_g * std::abs(in.v_g) * out.D_e / in.mu_g;
  // Rotational Reynolds number floored at 1 to avoid the negative-exponent
  // singularity of Nu_gr at omega = 0.
  const double Re_w =
      std::max(in.rho_g * in.omega * out.D_e * out.D_e / in.mu_g, 1.0);
  const double eta = std::max((th - std::sin(th)) / (2.0 * kPi), 1e-9);
  const double Nu_gs = 0.46 * std::pow(Re_D, 0.535) * std::pow(Re_w, 0.104) *
                       std::pow(eta, -0.341);
  const double Nu_gr = 1.54 * std::pow(Re_D, 0.575) * std::pow(Re_w, -0.292);
  out.gs = in.beta_gs_factor * in.k_g / out.D_e * Nu_gs;
  out.gr = in.k_g / out.D_e * Nu_gr;
  if (th > 0.0 && in.k_s > 0.0 && in.c_s_volumetric > 0.0 && in.omega > 0.0) {
    const double l_r = in.r_c * th;
    const double alpha_B = in.k_s / in.c_s_volumetric;
    out.rs = 11.6 * in.k_s / l_r *
             std::pow(in.omega * in.r_c * in.r_c * th / alpha_B, 0.3);
  }
  return out;
}

double beta_cooler(double Re, double Pr, double k_s, double D_p) {
  if (!(D_p > 0.0)) throw Error("beta_cooler: D_p must be positive");
  const double Nu = 2.0 + 1.8 * std::cbrt(Pr) * std::sqrt(std::max(Re, 0.0));
  const double shape = 0.25;  // clinker shape correction
  return k_s * Nu / (D_p + 0.5 * shape * D_p * Nu);
}

double radiation_pair(double A, double eps_i, double T_i, double eps_j,
                      double T_j) {
  auto p4 = [](double T) { return T * T * T * T; };
  return A * kStefanBoltzmann * (eps_i * p4(T_i) - eps_j * p4(T_j));
}

double radiation_cyclone(double A_c, double V_hat_s, double eps_p,
                         double eps_r, double T_m, double T_r) {
  const double F = 1.0 / (1.0 / eps_p + 1.0 / eps_r - 1.0);
  const double A_cs = A_c * std::max(V_hat_s, 0.0);
  auto p4 = [](double T) { return T * T * T * T; };
  return kStefanBoltzmann * A_cs * F * (p4(T_m) - p4(T_r));
}

KilnRadiation radiation_kiln(const KilnRadiationInput& in) {
  auto p4 = [](double T) { return T * T * T * T; };
  KilnRadiation out;
  out.gs = kStefanBoltzmann * in.A_gs * (1.0 + in.eps_s) *
           (in.eps_g * p4(in.T_g) - in.alpha_gs * p4(in.T_s)) / 2.0;
  out.gw = kStefanBoltzmann * in.A_gw * (1.0 + in.eps_w) *
           (in.eps_g * p4(in.T_g) - in.alpha_gw * p4(in.T_w)) / 2.0;
  const double omega_view =
      in.L_c / (2.0 * (kPi - in.tilt) * in.r_c);
  out.ws = kStefanBoltzmann * in.A_ws * in.eps_w * in.eps_s * omega_view *
           (p4(in.T_w) - p4(in.T_s));
  return out;
}

double path_length_kiln(double r_c, double bed_height) {
  return 0.95 * (2.0 * r_c - bed_height);
}

double path_length_cooler(double bed_height) { return bed_height / 2.0; }

double path_length_duct(double A_c_cross) {
  return std::sqrt(A_c_cross / kPi);
}

}  // namespace pyro
