#include "pyro/transport.hpp"

#include <algorithm>
#include <cmath>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/properties.hpp"

namespace pyro {

double darcy_velocity(double dP, double dl, double D_H, double rho, double mu,
                      double f0) {
  if (!(rho > 0.0) || !(mu > 0.0))
    throw Error("darcy_velocity: density and viscosity must be positive");
  if (!(dl > 0.0 && D_H > 0.0 && f0 > 0.0))
    throw Error("darcy_velocity: dl, D_H, f0 must be positive");
  if (dP == 0.0) return 0.0;
  const double grad = std::abs(dP) / dl;
  const double coeff = 2.0 / (0.316 * f0) *
                       std::pow(std::pow(D_H, 5) / (mu * rho * rho * rho), 0.25);
  // The 4/7 power has unbounded slope at zero pressure gradient; below a
  // tiny threshold the curve continues linearly through the origin so Newton
  // iterations stay stable on nearly balanced faces.
  constexpr double kLinearBelow = 0.01;  // Pa/m
  const double mag =
      grad >= kLinearBelow
          ? std::pow(coeff * grad, 4.0 / 7.0)
          : std::pow(coeff * kLinearBelow, 4.0 / 7.0) * grad / kLinearBelow;
  return dP < 0.0 ? mag : -mag;
}

double saeman_velocity(double omega, double theta, double phi, double r_c,
                       double tilt, double repose_xi) {
  if (omega == 0.0) return 0.0;
  const double L_c = 2.0 * r_c * std::sin(0.5 * theta);
  if (L_c <= 0.0) return 0.0;  // empty bed
  const double ratio = std::min(L_c / (2.0 * r_c), 1.0);
  const double drive = (tilt + phi * std::cos(repose_xi)) / std::sin(repose_xi);
  return omega * drive * kPi * L_c / std::asin(ratio);
}

double upwind_flux(double v, double C_up, double C_down, double D,
                   double dC_per_dl) {
  const double advect = v >= 0.0 ? v * C_up : v * C_down;
  return advect - D * dC_per_dl;
}

double fuller_binary(const CompoundTable& table, Gas i, Gas j, double T,
                     double P) {
  const double M_i = table.gas(i).molar_mass * 1e3;  // g/mol
  const double M_j = table.gas(j).molar_mass * 1e3;
  const double M_ij = 2.0 / (1.0 / M_i + 1.0 / M_j);
  const double V_i = table.gas(i).diffusion_volume;
  const double V_j = table.gas(j).diffusion_volume;
  const double sum = std::cbrt(V_i) + std::cbrt(V_j);
  const double P_bar = pa_to_bar(P);
  const double D_cm2_s = 0.00143 * std::pow(T, 1.75) /
                         (P_bar * std::sqrt(M_ij) * sum * sum);
  return D_cm2_s * 1e-4;
}

GasVec fuller_diffusion(const CompoundTable& table, double T, double P,
                        const GasVec& C_g) {
  GasVec D{};
  double c_g = 0.0;
  std::size_t present = 0;
  for (double c : C_g)
    if (c > 0.0) {
      c_g += c;
      ++present;
    }
  if (present < 2) return D;  // no diffusion partner
  for (std::size_t i = 0; i < kNumGases; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < kNumGases; ++j) {
      if (j == i || !(C_g[j] > 0.0)) continue;
      const double x_j = C_g[j] / c_g;
      sum += x_j / fuller_binary(table, static_cast<Gas>(i),
                                 static_cast<Gas>(j), T, P);
    }
    D[i] = sum > 0.0 ? 1.0 / sum : 0.0;
  }
  return D;
}

CycloneSeparation cyclone_separation(const CycloneInletState& inlet,
                                     const CycloneChamberState& chamber,
                                     const CycloneDims& dims,
                                     const CycloneGeometry& geom,
                                     const CycloneTuning& tuning,
                                     const CompoundTable& table) {
  CycloneSeparation out;
  out.v_sx = tuning.f_N * chamber.v_gx;
  if (!(inlet.v_in > 0.0)) return out;

  double m_s = 0.0, m_g = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i)
    m_s += std::max(inlet.C_s[i], 0.0) * table.species(i).molar_mass;
  for (std::size_t i = 0; i < kNumGases; ++i)
    m_g += std::max(inlet.C_g[i], 0.0) * table.species(kNumSolids + i).molar_mass;
  if (!(m_g > 0.0)) throw Error("cyclone_separation: empty inlet gas");
  out.c_0 = m_s / m_g;
  if (!(out.c_0 > 0.0)) return out;  // no solids: nothing separates

  // Inlet constriction and wall tangential velocity.
  const double beta_in = dims.w_in / dims.r_c;
  const double b2 = beta_in * (2.0 - beta_in);
  const double inner = 1.0 - b2 * (1.0 - beta_in * beta_in) / (1.0 + out.c_0);
  const double alpha =
      (1.0 - std::sqrt(1.0 - b2 * std::sqrt(std::max(inner, 0.0)))) / beta_in;
  out.v_theta_w = dims.r_in / (dims.r_c * alpha) * inlet.v_in;

  const double f_S = 0.005 * (1.0 + 3.0 * std::sqrt(out.c_0));
  const double drag =
      f_S * geom.A_sep * out.v_theta_w / (2.0 * dims.A_in * inlet.v_in);
  auto v_theta = [&](double r) {
    const double rr = dims.r_c / r;
    return rr * out.v_theta_w / (1.0 + drag * std::sqrt(rr));
  };

  // Radial particle velocity at the equivalent cylinder radius.
  const double r_eq = std::sqrt(geom.V_delta / (kPi * dims.h_t));
  const double d_rho =
      std::max(chamber.rho_s_particle - chamber.rho_g, 0.0);
  const double vth_eq = v_theta(r_eq);
  out.v_sep = tuning.d_m * tuning.d_m * d_rho / (18.0 * inlet.mu_m) *
              vth_eq * vth_eq / r_eq;

  // Cut size with the 10% inlet bypass and loading limit.
  const double vth_x = v_theta(dims.r_x);
  const double h_i = dims.h_t - dims.h_x;
  if (d_rho > 0.0 && vth_x > 0.0) {
    out.d_star = std::sqrt(18.0 * inlet.mu_m * 0.9 * dims.A_in * inlet.v_in /
                           (d_rho * 2.0 * kPi * h_i * vth_x * vth_x));
    const double delta = out.c_0 >= 0.1 ? 1.0 : 0.0;
    const double k_exp = 0.15 * delta +
                         (-0.11 - 0.10 * std::log(out.c_0)) * (1.0 - delta);
    out.c_0L = tuning.f_c * 0.025 * (out.d_star / tuning.d_m) *
               std::pow(10.0 * out.c_0, k_exp);
    out.eta_sal = 1.0 - std::min(1.0, out.c_0L / out.c_0);
  }
  return out;
}

// Flux vectors carry flow direction in their sign (and diffusive parts can
// mix signs across species), so these stay exactly linear with no clamping.
double enthalpy_flux_solid(const CompoundTable& table, double T_up,
                           const SolidVec& N) {
  double h = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i) {
    if (N[i] == 0.0) continue;
    const CompoundRecord& r = table.species(i);
    h += N[i] * (r.formation_enthalpy + r.cp.integral_from_ref(T_up));
  }
  return h;
}

double enthalpy_flux_gas(const CompoundTable& table, double T_up,
                         const GasVec& N) {
  double h = 0.0;
  for (std::size_t i = 0; i < kNumGases; ++i) {
    if (N[i] == 0.0) continue;
    const CompoundRecord& r = table.species(kNumSolids + i);
    h += N[i] * (r.formation_enthalpy + r.cp.integral_from_ref(T_up));
  }
  return h;
}

double conduction_flux(double k, double dT_per_dl) { return -k * dT_per_dl; }

}  // namespace pyro
