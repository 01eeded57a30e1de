#include "pyro/units.hpp"

#include <algorithm>
#include <cmath>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"

namespace pyro {

namespace {

SolidVec clamp0(const SolidVec& v) {
  SolidVec out;
  for (std::size_t i = 0; i < kNumSolids; ++i) out[i] = std::max(v[i], 0.0);
  return out;
}

GasVec clamp0(const GasVec& v) {
  GasVec out;
  for (std::size_t i = 0; i < kNumGases; ++i) out[i] = std::max(v[i], 0.0);
  return out;
}

double sum(const GasVec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double mass_of(const CompoundTable& t, const SolidVec& C) {
  double m = 0.0;
  for (std::size_t i = 0; i < kNumSolids; ++i)
    m += C[i] * t.species(i).molar_mass;
  return m;
}

double mass_of_gas(const CompoundTable& t, const GasVec& C) {
  double m = 0.0;
  for (std::size_t i = 0; i < kNumGases; ++i)
    m += C[i] * t.species(kNumSolids + i).molar_mass;
  return m;
}

bool any_solid(const SolidVec& C) {
  for (double v : C)
    if (v > 1e-14) return true;
  return false;
}

// Gnielinski with a laminar floor so residual evaluation stays total on cold
// or stagnant iterates (the bare correlation is invalid below Re 1000).
double beta_duct_guarded(double Re, double Pr, double k, double D_H) {
  constexpr double kLaminarNu = 3.66;
  const double laminar = k * kLaminarNu / D_H;
  if (!(Re > 1000.0) || !(Pr > 0.0)) return laminar;
  return std::max(beta_duct(Re, Pr, k, D_H), laminar);
}

// Reaction rates with the clinker rows at the solid temperature and the fuel
// rows at the gas temperature (both equal for mixture-phase modules).
std::array<double, kNumReactions> split_rates(const PlantShared& sh, double T_s,
                                              double T_g, double P,
                                              const SolidVec& C_s,
                                              const GasVec& C_g) {
  const auto r_solid = reaction_rates(sh.reactions, sh.table, T_s, P, C_s, C_g);
  if (T_s == T_g) return r_solid;
  const auto r_gas = reaction_rates(sh.reactions, sh.table, T_g, P, C_s, C_g);
  std::array<double, kNumReactions> r{};
  for (std::size_t j = 0; j < 6; ++j) r[j] = r_solid[j];
  for (std::size_t j = 6; j < kNumReactions; ++j) r[j] = r_gas[j];
  return r;
}

// Scaled energy-closure residual (O(1) rows keep the Jacobian balanced).
double energy_row(double U, double U_model) {
  return (U - U_model) / (std::abs(U) + 1e6);
}

double lining_row(const LiningMaterial& mat, double U, double T) {
  return energy_row(U, mat.enthalpy_density(T));
}

// Environment losses of a wall element: half-wall conduction in series with
// the external film, plus grey radiation to the surroundings.
double wall_env_loss(const PlantShared& sh, double A_w, double r_r, double r_w,
                     double T_w) {
  const double r_mid = 0.5 * (r_r + r_w);
  const double chain = conductance_series(
      {ConductanceLeg::barrier(A_w, curved_depth(r_mid, r_w),
                               sh.shell.conductivity),
       ConductanceLeg::film(A_w, sh.external_film)});
  return chain * (T_w - sh.T_env) +
         radiation_pair(A_w, sh.eps.wall, T_w, sh.eps.environment, sh.T_env);
}

// Mixture -> refractory and refractory -> wall series conductances for the
// suspension modules (phase temperatures at the phase centers).
struct LiningChains {
  double mr = 0.0;
  double rw = 0.0;
};

LiningChains lining_chains(const PlantShared& sh, double beta_m, double A_c,
                           double A_r, double A_w, double r_c, double r_r,
                           double r_w) {
  const double r_mid_r = 0.5 * (r_c + r_r);
  const double r_mid_w = 0.5 * (r_r + r_w);
  LiningChains out;
  out.mr = conductance_series(
      {ConductanceLeg::film(A_c, beta_m),
       ConductanceLeg::barrier(0.5 * (A_c + A_r), curved_depth(r_c, r_mid_r),
                               sh.refractory.conductivity)});
  out.rw = conductance_series(
      {ConductanceLeg::barrier(A_r, curved_depth(r_mid_r, r_r),
                               sh.refractory.conductivity),
       ConductanceLeg::barrier(0.5 * (A_r + A_w), curved_depth(r_r, r_mid_w),
                               sh.shell.conductivity)});
  return out;
}

}  // namespace

double MolarFeed::mass_flow(const CompoundTable& table) const {
  return mass_of(table, solids) + mass_of_gas(table, gases);
}

bool MolarFeed::empty() const {
  for (double v : solids)
    if (v != 0.0) return false;
  for (double v : gases)
    if (v != 0.0) return false;
  return true;
}

// --- Cyclone -----------------------------------------------------------------

struct CycloneUnit::Eval {
  SolidVec C_s{};
  GasVec C_g{};
  double V_hat_s = 0.0;
  double c_g = 0.0;
  double rho_seg_s = 0.0;
  double rho_seg_g = 0.0;
  double mu_m = 0.0;
  double v_gx = 0.0;
  CycloneSeparation sep;
};

CycloneUnit::Eval CycloneUnit::evaluate(const PlantShared& sh,
                                        const SegState& s, const Stream& inlet,
                                        double P_down) const {
  Eval e;
  e.C_s = clamp0(s.C_s);
  e.C_g = clamp0(s.C_g);
  e.V_hat_s = volume_solid(sh.table, e.C_s);
  e.c_g = sum(e.C_g);
  e.rho_seg_s = mass_of(sh.table, e.C_s);
  e.rho_seg_g = mass_of_gas(sh.table, e.C_g);
  e.mu_m = mixture_viscosity(sh.table, s.T[0], e.C_g,
                             std::min(e.V_hat_s, 0.49));
  const double rho_m = std::max(e.rho_seg_s + e.rho_seg_g, 1e-6);
  // Exit velocity over the vortex-finder depth; the chamber pressure below
  // the outlet pipe represents the whole chamber.
  e.v_gx = darcy_velocity(P_down - s.P, dims.h_x, 2.0 * dims.r_x, rho_m,
                          e.mu_m, f0);

  CycloneInletState in;
  in.v_in = inlet.v;
  if (inlet.v > 1e-9) {
    for (std::size_t i = 0; i < kNumSolids; ++i)
      in.C_s[i] = std::max(inlet.Ns[i], 0.0) / inlet.v;
    for (std::size_t i = 0; i < kNumGases; ++i)
      in.C_g[i] = std::max(inlet.Ng[i], 0.0) / inlet.v;
  }
  in.mu_m = e.mu_m;
  CycloneChamberState ch;
  const double V_hat_g =
      std::max(e.c_g * kGasConstant * s.T[0] / s.P, 1e-3);
  ch.rho_s_particle = e.V_hat_s > 1e-12 ? e.rho_seg_s / e.V_hat_s : 0.0;
  ch.rho_g = e.rho_seg_g / std::min(V_hat_g, 1.0);
  ch.v_gx = e.v_gx;
  e.sep = in.v_in > 1e-9 && e.rho_seg_g > 0.0
              ? cyclone_separation(in, ch, dims, geom, tune, sh.table)
              : CycloneSeparation{};
  return e;
}

Stream CycloneUnit::top_outlet(const PlantShared& sh, const SegState& s,
                               double P_down) const {
  const Eval e = evaluate(sh, s, Stream{}, P_down);
  Stream out;
  if (e.v_gx <= 0.0) return out;  // no backflow between modules
  const double v_sx = tune.f_N * e.v_gx;
  for (std::size_t i = 0; i < kNumGases; ++i) out.Ng[i] = e.v_gx * e.C_g[i];
  for (std::size_t i = 0; i < kNumSolids; ++i) out.Ns[i] = v_sx * e.C_s[i];
  out.Hg = e.v_gx * enthalpy_gas(sh.table, s.T[0], e.C_g);
  out.Hs = v_sx * enthalpy_solid(sh.table, s.T[0], e.C_s);
  out.v = e.v_gx;
  out.P_up = s.P;
  return out;
}

Stream CycloneUnit::bottom_outlet(const PlantShared& sh, const SegState& s,
                                  const Stream& inlet, const Stream& eye,
                                  double P_down) const {
  const Eval e = evaluate(sh, s, inlet, P_down);
  Stream out;
  const double to_d_in = dims.A_in / geom.A_d;
  const double to_d_sep = geom.A_sep / geom.A_d;
  const double to_d_eye = geom.A_x / geom.A_d;
  for (std::size_t i = 0; i < kNumSolids; ++i) {
    const double sal = e.sep.eta_sal * std::max(inlet.Ns[i], 0.0);
    const double sep = e.sep.v_sep * e.C_s[i];
    out.Ns[i] = to_d_in * sal + to_d_sep * sep + to_d_eye * eye.Ns[i];
  }
  out.Hs = to_d_in * e.sep.eta_sal * inlet.Hs +
           to_d_sep * e.sep.v_sep * enthalpy_solid(sh.table, s.T[0], e.C_s) +
           to_d_eye * eye.Hs;
  return out;
}

void CycloneUnit::residuals(const PlantShared& sh, const SegState& s,
                            const Stream& inlet, const Stream& eye,
                            double P_down, SegDeriv* dx, double* g,
                            UnitDiag* diag) const {
  const Eval e = evaluate(sh, s, inlet, P_down);
  const double T_m = s.T[0], T_r = s.T[1], T_w = s.T[2];
  const double V = geom.V_delta;
  const double eta = e.sep.eta_sal;
  const double v_sx = e.v_gx > 0.0 ? tune.f_N * e.v_gx : 0.0;
  const double v_gx = std::max(e.v_gx, 0.0);

  const auto rates = split_rates(sh, T_m, T_m, s.P, e.C_s, e.C_g);
  const ProductionRates R = production_rates(sh.reactions, rates);

  for (std::size_t i = 0; i < kNumSolids; ++i) {
    const double in_i = (1.0 - eta) * std::max(inlet.Ns[i], 0.0);
    dx->dC_s[i] = (dims.A_in * in_i - geom.A_x * v_sx * e.C_s[i] -
                   geom.A_sep * e.sep.v_sep * e.C_s[i]) /
                      V +
                  R.solids[i];
  }
  for (std::size_t i = 0; i < kNumGases; ++i)
    dx->dC_g[i] =
        (dims.A_in * inlet.Ng[i] - geom.A_x * v_gx * e.C_g[i]) / V +
        R.gases[i];

  // Heat transfer chains.
  const double k_g = e.c_g > 0.0 ? gas_conductivity(sh.table, T_m, e.C_g) : 0.02;
  const double k_m = e.c_g > 0.0
                         ? suspension_conductivity(sh.table, T_m, e.C_s, e.C_g)
                         : 0.02;
  CycloneBetaInput bi;
  bi.v_in = std::max(inlet.v, 0.01);
  bi.u_mf = sh.u_mf;
  bi.d_p = sh.d_p_cyclone;
  bi.dP_c = std::max(inlet.P_up - s.P, 0.0);
  bi.rho_g = std::max(e.rho_seg_g, 1e-6);
  bi.rho_s = e.rho_seg_s;
  bi.c_g = heat_capacity(sh.table, T_m, e.C_g, true);
  bi.c_s = heat_capacity(sh.table, T_m, e.C_s, false);
  bi.k_g = k_g;
  bi.k_s = any_solid(e.C_s) ? solid_conductivity(sh.table, e.C_s) : 0.0;
  bi.k_m = k_m;
  bi.mu_g = e.c_g > 0.0 ? gas_viscosity(sh.table, T_m, e.C_g) : 2e-5;
  bi.r_c = dims.r_c;
  bi.D_H = 4.0 * geom.V_delta / geom.A_cy;
  const double beta_m = beta_cyclone(bi);

  const LiningChains ch = lining_chains(sh, beta_m, geom.A_cy, geom.A_r,
                                        geom.A_w, dims.r_c, dims.r_r, dims.r_w);
  const double Q_mr = ch.mr * (T_m - T_r) +
                      radiation_cyclone(geom.A_cy, e.V_hat_s, sh.eps.particle,
                                        sh.eps.refractory, T_m, T_r);
  const double Q_rw = ch.rw * (T_r - T_w);
  const double Q_we = wall_env_loss(sh, geom.A_w, dims.r_r, dims.r_w, T_w);

  const double H_sx = v_sx * enthalpy_solid(sh.table, T_m, e.C_s);
  const double H_gx = v_gx * enthalpy_gas(sh.table, T_m, e.C_g);
  const double H_sep = e.sep.v_sep * enthalpy_solid(sh.table, T_m, e.C_s);
  const double dHs =
      dims.A_in * (1.0 - eta) * inlet.Hs - geom.A_x * H_sx - geom.A_sep * H_sep;
  const double dHg = dims.A_in * inlet.Hg - geom.A_x * H_gx;
  dx->dU[0] = (dHs + dHg - Q_mr) / V;
  dx->dU[1] = (Q_mr - Q_rw) / geom.V_r;
  dx->dU[2] = (Q_rw - Q_we) / geom.V_w;

  g[0] = energy_row(s.U[0],
                    enthalpy_solid(sh.table, T_m, e.C_s) +
                        enthalpy_gas(sh.table, T_m, e.C_g) -
                        e.c_g * kGasConstant * T_m);
  g[1] = lining_row(sh.refractory, s.U[1], T_r);
  g[2] = lining_row(sh.shell, s.U[2], T_w);
  g[3] = e.V_hat_s + e.c_g * kGasConstant * T_m / s.P - 1.0;

  if (diag) {
    diag->Q_env = Q_we;
    diag->solids_in_mass = dims.A_in * mass_of(sh.table, inlet.Ns);
    diag->saltation_mass = eta * diag->solids_in_mass;
    SolidVec sep_flux;
    for (std::size_t i = 0; i < kNumSolids; ++i)
      sep_flux[i] = e.sep.v_sep * e.C_s[i];
    diag->separation_mass = geom.A_sep * mass_of(sh.table, sep_flux);
    diag->eta_total =
        diag->solids_in_mass > 1e-12
            ? (diag->saltation_mass + diag->separation_mass) /
                  diag->solids_in_mass
            : 0.0;
  }
}

// --- Duct -----------------------------------------------------------------------

void DuctUnit::init() {
  seg.clear();
  for (int k = 0; k < dims.n_segments; ++k)
    seg.push_back(duct_segment_geometry(dims, k));
}

namespace {

// Radius of the duct bore at a face coordinate (piecewise linear profile).
double duct_face_radius(const DuctDims& d, double y) {
  if (y < d.h_cl && d.h_cl > 0.0) return d.r_l + (d.r_c - d.r_l) * y / d.h_cl;
  if (y > d.h_cu && d.h_cu < d.h_tot)
    return d.r_c + (d.r_u - d.r_c) * (y - d.h_cu) / (d.h_tot - d.h_cu);
  return d.r_c;
}

struct DuctSegProps {
  SolidVec C_s{};
  GasVec C_g{};
  double V_hat_s = 0.0;
  double c_g = 0.0;
  double rho_m = 0.0;
  double mu_m = 0.0;
  double k_m = 0.0;
  double c_hat_m = 0.0;  // volumetric mixture heat capacity
  double D_H = 0.0;
};

DuctSegProps duct_props(const PlantShared& sh, const SegState& s,
                        const DuctSegmentGeometry& geo, double dy) {
  DuctSegProps p;
  p.C_s = clamp0(s.C_s);
  p.C_g = clamp0(s.C_g);
  p.V_hat_s = volume_solid(sh.table, p.C_s);
  p.c_g = sum(p.C_g);
  p.rho_m = std::max(mass_of(sh.table, p.C_s) + mass_of_gas(sh.table, p.C_g),
                     1e-6);
  p.mu_m = p.c_g > 0.0 ? mixture_viscosity(sh.table, s.T[0], p.C_g,
                                           std::min(p.V_hat_s, 0.49))
                       : 2e-5;
  p.k_m = p.c_g > 0.0
              ? suspension_conductivity(sh.table, s.T[0], p.C_s, p.C_g)
              : 0.02;
  p.c_hat_m = heat_capacity(sh.table, s.T[0], p.C_s, false) +
              heat_capacity(sh.table, s.T[0], p.C_g, true);
  p.D_H = 4.0 * geo.V_delta / geo.A_c;
  (void)dy;
  return p;
}

}  // namespace

Stream DuctUnit::top_outlet(const PlantShared& sh,
                            const std::vector<SegState>& s,
                            double P_down) const {
  const int n = dims.n_segments;
  const double dy = dims.segment_height();
  const DuctSegProps p = duct_props(sh, s[n - 1], seg[n - 1], dy);
  const double v =
      darcy_velocity(P_down - s[n - 1].P, dy, p.D_H, p.rho_m, p.mu_m, f0);
  Stream out;
  if (v <= 0.0) return out;
  for (std::size_t i = 0; i < kNumSolids; ++i) out.Ns[i] = v * p.C_s[i];
  for (std::size_t i = 0; i < kNumGases; ++i) out.Ng[i] = v * p.C_g[i];
  out.Hs = v * enthalpy_solid(sh.table, s[n - 1].T[0], p.C_s);
  out.Hg = v * enthalpy_gas(sh.table, s[n - 1].T[0], p.C_g);
  out.v = v;
  out.P_up = s[n - 1].P;
  return out;
}

Stream DuctUnit::fall_outlet(const PlantShared& sh,
                             const std::vector<SegState>& s,
                             const Stream& inlet) const {
  Stream out;
  if (p_fall <= 0.0) return out;
  for (std::size_t i = 0; i < kNumSolids; ++i)
    out.Ns[i] = p_fall * std::max(inlet.Ns[i], 0.0);
  out.Hs = enthalpy_flux_solid(sh.table, s[0].T[0], out.Ns);
  return out;
}

void DuctUnit::residuals(const PlantShared& sh, const std::vector<SegState>& s,
                         const Stream& inlet,
                         const std::vector<MolarFeed>& fuel, double P_down,
                         std::vector<SegDeriv>* dx, double* g,
                         UnitDiag* diag) const {
  const int n = dims.n_segments;
  const double dy = dims.segment_height();

  std::vector<DuctSegProps> p(n);
  for (int k = 0; k < n; ++k) p[k] = duct_props(sh, s[k], seg[k], dy);

  // Face velocities and advective fluxes (face k sits below segment k;
  // face 0 is the inlet, face n the outlet).
  std::vector<double> v_face(n + 1, 0.0), A_face(n + 1, 0.0);
  std::vector<SolidVec> Ns(n + 1, SolidVec{});
  std::vector<GasVec> Ng(n + 1, GasVec{});
  std::vector<double> H_face(n + 1, 0.0);
  A_face[0] = inlet_area();
  for (int k = 1; k < n; ++k) {
    const double r = duct_face_radius(dims, k * dy);
    A_face[k] = kPi * r * r;
  }
  A_face[n] = outlet_area();

  v_face[0] = inlet.v;
  Ns[0] = inlet.Ns;
  Ng[0] = inlet.Ng;
  H_face[0] = inlet.Hs + inlet.Hg;
  for (int k = 1; k <= n; ++k) {
    const int lo = k - 1;
    const bool boundary = k == n;
    const double P_hi = boundary ? P_down : s[k].P;
    const double D_H =
        boundary ? p[lo].D_H : 0.5 * (p[lo].D_H + p[k].D_H);
    const double rho =
        boundary ? p[lo].rho_m : 0.5 * (p[lo].rho_m + p[k].rho_m);
    const double mu = boundary ? p[lo].mu_m : 0.5 * (p[lo].mu_m + p[k].mu_m);
    const double v = darcy_velocity(P_hi - s[lo].P, dy, D_H, rho, mu, f0);
    v_face[k] = v;
    if (v >= 0.0) {
      for (std::size_t i = 0; i < kNumSolids; ++i) Ns[k][i] = v * p[lo].C_s[i];
      for (std::size_t i = 0; i < kNumGases; ++i) Ng[k][i] = v * p[lo].C_g[i];
      H_face[k] = v * (enthalpy_solid(sh.table, s[lo].T[0], p[lo].C_s) +
                       enthalpy_gas(sh.table, s[lo].T[0], p[lo].C_g));
    } else if (!boundary) {
      for (std::size_t i = 0; i < kNumSolids; ++i) Ns[k][i] = v * p[k].C_s[i];
      for (std::size_t i = 0; i < kNumGases; ++i) Ng[k][i] = v * p[k].C_g[i];
      H_face[k] = v * (enthalpy_solid(sh.table, s[k].T[0], p[k].C_s) +
                       enthalpy_gas(sh.table, s[k].T[0], p[k].C_g));
    }
    // Backflow at the module outlet draws nothing in.
  }

  // Axial conduction within each phase (internal faces only).
  std::vector<double> q_m(n + 1, 0.0), q_r(n + 1, 0.0), q_w(n + 1, 0.0);
  std::vector<double> A_rx(n + 1, 0.0), A_wx(n + 1, 0.0);
  for (int k = 1; k < n; ++k) {
    const double k_m = 0.5 * (p[k - 1].k_m + p[k].k_m);
    q_m[k] = -k_m * (s[k].T[0] - s[k - 1].T[0]) / dy;
    q_r[k] = -sh.refractory.conductivity * (s[k].T[1] - s[k - 1].T[1]) / dy;
    q_w[k] = -sh.shell.conductivity * (s[k].T[2] - s[k - 1].T[2]) / dy;
    A_rx[k] = 0.5 * (seg[k - 1].V_r + seg[k].V_r) / dy;
    A_wx[k] = 0.5 * (seg[k - 1].V_w + seg[k].V_w) / dy;
  }

  double fall_mass[kNumSolids] = {};
  double fall_H = 0.0;
  if (p_fall > 0.0) {
    SolidVec fall{};
    for (std::size_t i = 0; i < kNumSolids; ++i) {
      fall[i] = p_fall * std::max(inlet.Ns[i], 0.0);
      fall_mass[i] = A_face[0] * fall[i];
    }
    fall_H = A_face[0] * enthalpy_flux_solid(sh.table, s[0].T[0], fall);
  }

  for (int k = 0; k < n; ++k) {
    const double V = seg[k].V_delta;
    const double T_m = s[k].T[0], T_r = s[k].T[1], T_w = s[k].T[2];
    const auto rates = split_rates(sh, T_m, T_m, s[k].P, p[k].C_s, p[k].C_g);
    const ProductionRates R = production_rates(sh.reactions, rates);

    SegDeriv& d = (*dx)[k];
    for (std::size_t i = 0; i < kNumSolids; ++i)
      d.dC_s[i] = (A_face[k] * Ns[k][i] - A_face[k + 1] * Ns[k + 1][i]) / V +
                  R.solids[i];
    for (std::size_t i = 0; i < kNumGases; ++i)
      d.dC_g[i] = (A_face[k] * Ng[k][i] - A_face[k + 1] * Ng[k + 1][i]) / V +
                  R.gases[i];

    // Film coefficient from the duct correlation on the segment velocity.
    const double v_seg =
        0.5 * (std::abs(v_face[k]) + std::abs(v_face[k + 1]));
    const double Re = p[k].rho_m * v_seg * p[k].D_H / p[k].mu_m;
    const double Pr = (p[k].c_hat_m / p[k].rho_m) * p[k].mu_m / p[k].k_m;
    const double beta_m = beta_duct_guarded(Re, Pr, p[k].k_m, p[k].D_H);

    const LiningChains ch =
        lining_chains(sh, beta_m, seg[k].A_c, seg[k].A_r, seg[k].A_w, dims.r_c,
                      dims.r_r, dims.r_w);
    const double A_cross = seg[k].V_delta / dy;
    const GasRadiation rad = gas_emissivity(
        sh.emissivity_model, T_m, T_r, s[k].P, p[k].C_g,
        path_length_duct(A_cross));
    const double eps_m = mixture_emissivity(sh.eps.solid, rad.eps_g);
    const double Q_mr =
        ch.mr * (T_m - T_r) +
        radiation_pair(seg[k].A_c, eps_m, T_m, sh.eps.refractory, T_r);
    const double Q_rw = ch.rw * (T_r - T_w);
    const double Q_we = wall_env_loss(sh, seg[k].A_w, dims.r_r, dims.r_w, T_w);

    const double H_div =
        A_face[k] * H_face[k] - A_face[k + 1] * H_face[k + 1];
    const double q_m_div = A_face[k] * q_m[k] - A_face[k + 1] * q_m[k + 1];
    d.dU[0] = (H_div + q_m_div - Q_mr) / V;
    d.dU[1] = (A_rx[k] * q_r[k] - A_rx[k + 1] * q_r[k + 1] + Q_mr - Q_rw) /
              seg[k].V_r;
    d.dU[2] = (A_wx[k] * q_w[k] - A_wx[k + 1] * q_w[k + 1] + Q_rw - Q_we) /
              seg[k].V_w;

    if (k == 0) {
      // Fall-through sink and (calciner) fuel source.
      for (std::size_t i = 0; i < kNumSolids; ++i) d.dC_s[i] -= fall_mass[i] / V;
      d.dU[0] -= fall_H / V;
      for (const MolarFeed& src_feed : fuel) {
        if (src_feed.empty()) continue;
        for (std::size_t i = 0; i < kNumSolids; ++i)
          d.dC_s[i] += src_feed.solids[i] / V;
        for (std::size_t i = 0; i < kNumGases; ++i)
          d.dC_g[i] += src_feed.gases[i] / V;
        d.dU[0] += (enthalpy_solid(sh.table, src_feed.T, src_feed.solids) +
                    enthalpy_gas(sh.table, src_feed.T, src_feed.gases)) /
                   V;
      }
    }

    double* gk = g + 4 * k;
    gk[0] = energy_row(s[k].U[0],
                       enthalpy_solid(sh.table, T_m, p[k].C_s) +
                           enthalpy_gas(sh.table, T_m, p[k].C_g) -
                           p[k].c_g * kGasConstant * T_m);
    gk[1] = lining_row(sh.refractory, s[k].U[1], T_r);
    gk[2] = lining_row(sh.shell, s[k].U[2], T_w);
    gk[3] = p[k].V_hat_s + p[k].c_g * kGasConstant * T_m / s[k].P - 1.0;

    if (diag) diag->Q_env += Q_we;
  }
}

// --- Kiln -----------------------------------------------------------------------

double KilnUnit::bulk_volume_fraction(const PlantShared& sh,
                                      const SegState& s) const {
  return volume_solid(sh.table, clamp0(s.C_s), porosity);
}

Stream KilnUnit::gas_outlet(const PlantShared& sh,
                            const std::vector<SegState>& s,
                            double P_down) const {
  const SegState& s0 = s[0];
  const GasVec C_g = clamp0(s0.C_g);
  const double c_g = sum(C_g);
  Stream out;
  if (!(c_g > 0.0)) return out;
  const double V_hat_g = c_g * kGasConstant * s0.T[1] / s0.P;
  const double rho_g = mass_of_gas(sh.table, C_g) / std::max(V_hat_g, 1e-3);
  const double mu_g = gas_viscosity(sh.table, s0.T[1], C_g);
  const std::vector<KilnSectionGeometry> sec = kiln_section_geometry(
      {s0.theta}, dims.r_c, dims.segment_length());
  const double D_H =
      4.0 * sec[0].A_g * dims.segment_length() /
      std::max(sec[0].A_gr + sec[0].A_gs, 1e-6);
  const double v = darcy_velocity(s0.P - P_down, dims.segment_length(), D_H,
                                  rho_g, mu_g, f0);
  if (v >= 0.0) return out;  // gas must leave towards the calciner (-z)
  for (std::size_t i = 0; i < kNumGases; ++i) out.Ng[i] = -v * C_g[i];
  out.Hg = -v * enthalpy_gas(sh.table, s0.T[1], C_g);
  out.v = -v;
  out.P_up = s0.P;
  return out;
}

Stream KilnUnit::solids_outlet(const PlantShared& sh,
                               const std::vector<SegState>& s,
                               double omega) const {
  const int n = dims.n_segments;
  std::vector<double> theta(n);
  for (int k = 0; k < n; ++k) theta[k] = s[k].theta;
  const auto sec =
      kiln_section_geometry(theta, dims.r_c, dims.segment_length());
  const double xi = repose_slope * omega + repose_offset;
  const double v = saeman_velocity(omega, s[n - 1].theta, sec[n - 1].phi,
                                   dims.r_c, dims.tilt, xi);
  Stream out;
  if (v <= 0.0) return out;
  const SolidVec C_s = clamp0(s[n - 1].C_s);
  for (std::size_t i = 0; i < kNumSolids; ++i) out.Ns[i] = v * C_s[i];
  out.Hs = v * enthalpy_solid(sh.table, s[n - 1].T[0], C_s);
  out.v = v;
  out.P_up = s[n - 1].P;
  return out;
}

void KilnUnit::residuals(const PlantShared& sh, const std::vector<SegState>& s,
                         const Stream& solids_in, const Stream& gas_in,
                         const std::vector<MolarFeed>& burner,
                         double P_down_gas, double omega,
                         std::vector<SegDeriv>* dx, double* g,
                         UnitDiag* diag) const {
  const int n = dims.n_segments;
  const double dz = dims.segment_length();
  const double A_tot = dims.cross_area();
  const double V = A_tot * dz;
  const double V_w = kPi * (dims.r_r * dims.r_r - dims.r_c * dims.r_c) * dz;
  const double xi = repose_slope * omega + repose_offset;

  std::vector<double> theta(n);
  for (int k = 0; k < n; ++k) theta[k] = s[k].theta;
  const auto sec = kiln_section_geometry(theta, dims.r_c, dz);

  struct Props {
    SolidVec C_s;
    GasVec C_g;
    double c_g, V_hat_bulk, V_hat_g, rho_g, mu_g, k_g, k_s, c_hat_s, c_hat_g;
  };
  std::vector<Props> p(n);
  for (int k = 0; k < n; ++k) {
    p[k].C_s = clamp0(s[k].C_s);
    p[k].C_g = clamp0(s[k].C_g);
    p[k].c_g = sum(p[k].C_g);
    p[k].V_hat_bulk = volume_solid(sh.table, p[k].C_s, porosity);
    p[k].V_hat_g =
        std::max(p[k].c_g * kGasConstant * s[k].T[1] / s[k].P, 1e-3);
    p[k].rho_g = mass_of_gas(sh.table, p[k].C_g) / std::min(p[k].V_hat_g, 1.0);
    p[k].mu_g =
        p[k].c_g > 0.0 ? gas_viscosity(sh.table, s[k].T[1], p[k].C_g) : 2e-5;
    p[k].k_g = p[k].c_g > 0.0
                   ? gas_conductivity(sh.table, s[k].T[1], p[k].C_g)
                   : 0.02;
    p[k].k_s =
        any_solid(p[k].C_s) ? solid_conductivity(sh.table, p[k].C_s) : 0.0;
    p[k].c_hat_s = heat_capacity(sh.table, s[k].T[0], p[k].C_s, false);
    p[k].c_hat_g = heat_capacity(sh.table, s[k].T[1], p[k].C_g, true);
  }

  // Solid advection (+z), faces 0..n; face 0 is the feed inlet.
  std::vector<SolidVec> Ns(n + 1, SolidVec{});
  std::vector<double> Hs(n + 1, 0.0);
  Ns[0] = solids_in.Ns;
  Hs[0] = solids_in.Hs;
  for (int k = 1; k <= n; ++k) {
    const int up = k - 1;
    const double v = saeman_velocity(omega, s[up].theta, sec[up].phi, dims.r_c,
                                     dims.tilt, xi);
    if (v <= 0.0) continue;
    for (std::size_t i = 0; i < kNumSolids; ++i) Ns[k][i] = v * p[up].C_s[i];
    Hs[k] = v * enthalpy_solid(sh.table, s[up].T[0], p[up].C_s);
  }

  // Gas advection (-z) with axial diffusion, faces 0..n; face n carries the
  // burner-end influx, face 0 the exit towards the calciner.
  std::vector<GasVec> Ng(n + 1, GasVec{});
  std::vector<double> Hg(n + 1, 0.0);
  std::vector<double> v_gas_face(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    const double D_H_k =
        4.0 * sec[k].A_g * dz / std::max(sec[k].A_gr + sec[k].A_gs, 1e-6);
    double v;
    if (k == 0) {
      v = darcy_velocity(s[0].P - P_down_gas, dz, D_H_k, p[0].rho_g,
                         p[0].mu_g, f0);
    } else {
      const double D_H_f = 0.5 * (D_H_k + 4.0 * sec[k - 1].A_g * dz /
                                              std::max(sec[k - 1].A_gr +
                                                           sec[k - 1].A_gs,
                                                       1e-6));
      v = darcy_velocity(s[k].P - s[k - 1].P, dz, D_H_f,
                         0.5 * (p[k - 1].rho_g + p[k].rho_g),
                         0.5 * (p[k - 1].mu_g + p[k].mu_g), f0);
    }
    v_gas_face[k] = v;
    GasVec flux{};
    double T_up = 0.0;
    bool have = false;
    if (v < 0.0) {  // flow towards the calciner: upwind is the right segment
      for (std::size_t i = 0; i < kNumGases; ++i) flux[i] = v * p[k].C_g[i];
      T_up = s[k].T[1];
      have = true;
    } else if (k > 0) {
      for (std::size_t i = 0; i < kNumGases; ++i) flux[i] = v * p[k - 1].C_g[i];
      T_up = s[k - 1].T[1];
      have = true;
    }
    if (k > 0) {
      // Fuller diffusion between interior segments.
      GasVec mean{};
      for (std::size_t i = 0; i < kNumGases; ++i)
        mean[i] = 0.5 * (p[k - 1].C_g[i] + p[k].C_g[i]);
      const double T_f = 0.5 * (s[k - 1].T[1] + s[k].T[1]);
      const double P_f = 0.5 * (s[k - 1].P + s[k].P);
      const GasVec D = fuller_diffusion(sh.table, T_f, P_f, mean);
      for (std::size_t i = 0; i < kNumGases; ++i)
        flux[i] += -D[i] * (p[k].C_g[i] - p[k - 1].C_g[i]) / dz;
      if (!have) T_up = T_f;
      have = true;
    }
    Ng[k] = flux;
    if (have) Hg[k] = enthalpy_flux_gas(sh.table, T_up, flux);
  }
  // Burner-end influx enters moving -z.
  for (std::size_t i = 0; i < kNumGases; ++i) Ng[n][i] = -gas_in.Ng[i];
  Hg[n] = -gas_in.Hg;

  // Phase conduction on interior faces.
  std::vector<double> q_s(n + 1, 0.0), q_g(n + 1, 0.0), q_r(n + 1, 0.0);
  std::vector<double> A_s_face(n + 1, 0.0), A_g_face(n + 1, 0.0);
  const double A_r_cross = kPi * (dims.r_r * dims.r_r - dims.r_c * dims.r_c);
  for (int k = 1; k < n; ++k) {
    const double k_s_f = 0.5 * (p[k - 1].k_s + p[k].k_s);
    const double k_g_f = 0.5 * (p[k - 1].k_g + p[k].k_g);
    q_s[k] = -k_s_f * (s[k].T[0] - s[k - 1].T[0]) / dz;
    q_g[k] = -k_g_f * (s[k].T[1] - s[k - 1].T[1]) / dz;
    q_r[k] = -sh.refractory.conductivity * (s[k].T[2] - s[k - 1].T[2]) / dz;
    A_s_face[k] = 0.5 * (sec[k - 1].A_s + sec[k].A_s);
    A_g_face[k] = 0.5 * (sec[k - 1].A_g + sec[k].A_g);
  }

  for (int k = 0; k < n; ++k) {
    const double T_s = s[k].T[0], T_g = s[k].T[1], T_r = s[k].T[2];
    const auto rates = split_rates(sh, T_s, T_g, s[k].P, p[k].C_s, p[k].C_g);
    const ProductionRates R = production_rates(sh.reactions, rates);
    const double J_sg = calcination_heat(sh.table, T_s, s[k].P, rates[0]);

    SegDeriv& d = (*dx)[k];
    for (std::size_t i = 0; i < kNumSolids; ++i)
      d.dC_s[i] =
          (A_tot * Ns[k][i] - A_tot * Ns[k + 1][i]) / V + R.solids[i];
    for (std::size_t i = 0; i < kNumGases; ++i)
      d.dC_g[i] = (A_tot * Ng[k][i] - A_tot * Ng[k + 1][i]) / V + R.gases[i];

    // Tscheng convection and Mujumdar radiation.
    KilnBetaInput bi;
    bi.theta = s[k].theta;
    bi.r_c = dims.r_c;
    bi.omega = omega;
    bi.v_g = k < n - 1 ? 0.5 * (std::abs(v_gas_face[k]) +
                                std::abs(v_gas_face[k + 1]))
                       : std::abs(v_gas_face[k]);
    bi.rho_g = p[k].rho_g;
    bi.mu_g = p[k].mu_g;
    bi.k_g = p[k].k_g;
    bi.k_s = p[k].k_s;
    bi.c_s_volumetric =
        p[k].V_hat_bulk > 1e-9 ? p[k].c_hat_s / p[k].V_hat_bulk : 0.0;
    bi.beta_gs_factor = beta_gs_factor;
    const KilnBetas beta = betas_kiln(bi);

    const double Q_gs_cv = sec[k].A_gs * beta.gs * (T_g - T_s);
    const double Q_gr_cv = sec[k].A_gr * beta.gr * (T_g - T_r);
    const double Q_rs_cv = sec[k].A_rs * beta.rs * (T_r - T_s);

    const double S_m = path_length_kiln(dims.r_c, sec[k].h);
    const GasRadiation rad_s = gas_emissivity(sh.emissivity_model, T_g, T_s,
                                              s[k].P, p[k].C_g, S_m);
    const GasRadiation rad_w = gas_emissivity(sh.emissivity_model, T_g, T_r,
                                              s[k].P, p[k].C_g, S_m);
    KilnRadiationInput ri;
    ri.A_gs = sec[k].A_gs;
    ri.A_gw = sec[k].A_gr;
    ri.A_ws = sec[k].A_rs;
    ri.eps_s = sh.eps.solid;
    ri.eps_w = sh.eps.refractory;
    ri.eps_g = rad_s.eps_g;
    ri.alpha_gs = rad_s.alpha_g;
    ri.alpha_gw = rad_w.alpha_g;
    ri.T_g = T_g;
    ri.T_s = T_s;
    ri.T_w = T_r;
    ri.L_c = sec[k].L_c;
    ri.r_c = dims.r_c;
    ri.tilt = dims.tilt;
    const KilnRadiation qr = radiation_kiln(ri);

    d.dU[0] = (A_tot * (Hs[k] - Hs[k + 1]) + A_s_face[k] * q_s[k] -
               A_s_face[k + 1] * q_s[k + 1] + Q_gs_cv + Q_rs_cv + qr.gs +
               qr.ws) /
                  V -
              J_sg;
    d.dU[1] = (A_tot * (Hg[k] - Hg[k + 1]) + A_g_face[k] * q_g[k] -
               A_g_face[k + 1] * q_g[k + 1] - Q_gs_cv - Q_gr_cv - qr.gs -
               qr.gw) /
                  V +
              J_sg;
    d.dU[2] = (A_r_cross * (q_r[k] - q_r[k + 1]) + Q_gr_cv + qr.gw -
               Q_rs_cv - qr.ws) /
              V_w;

    if (k == n - 1) {
      // Fuel ash joins the bed; carbon and transport air join the gas.
      for (const MolarFeed& src_feed : burner) {
        if (src_feed.empty()) continue;
        for (std::size_t i = 0; i < kNumSolids; ++i)
          d.dC_s[i] += src_feed.solids[i] / V;
        for (std::size_t i = 0; i < kNumGases; ++i)
          d.dC_g[i] += src_feed.gases[i] / V;
        d.dU[0] += enthalpy_solid(sh.table, src_feed.T, src_feed.solids) / V;
        d.dU[1] += enthalpy_gas(sh.table, src_feed.T, src_feed.gases) / V;
      }
    }

    double* gk = g + 5 * k;
    gk[0] = energy_row(s[k].U[0], enthalpy_solid(sh.table, T_s, p[k].C_s));
    gk[1] = energy_row(s[k].U[1], enthalpy_gas(sh.table, T_g, p[k].C_g) -
                                      p[k].c_g * kGasConstant * T_g);
    gk[2] = lining_row(sh.refractory, s[k].U[2], T_r);
    gk[3] = p[k].V_hat_bulk + p[k].c_g * kGasConstant * T_g / s[k].P - 1.0;
    // Fill-angle closure, scaled by r_c^2.
    gk[4] = 0.5 * (s[k].theta - std::sin(s[k].theta)) - p[k].V_hat_bulk * kPi;
  }
  if (diag) diag->Q_env = 0.0;  // kiln refractory exchanges only internally
}

// --- Cooler ----------------------------------------------------------------------

std::vector<double> CoolerUnit::roof_velocities(const PlantShared& sh,
                                                const std::vector<SegState>& s,
                                                double P_kiln,
                                                double P_r5) const {
  const int n = dims.n_segments;
  std::vector<double> v(n, 0.0);
  for (int k = 0; k < n; ++k) {
    const GasVec C_g = clamp0(s[k].C_g);
    const double c_g = sum(C_g);
    if (!(c_g > 0.0)) continue;
    const SolidVec C_s = clamp0(s[k].C_s);
    const double V_hat_g =
        std::max(c_g * kGasConstant * s[k].T[1] / s[k].P, 1e-3);
    const double rho_g =
        mass_of_gas(sh.table, C_g) / std::min(V_hat_g, 1.0);
    const double mu_g = gas_viscosity(sh.table, s[k].T[1], C_g);
    const double V_g = std::min(V_hat_g, 1.0) * geom.V_delta;
    const double A_cl = 6.0 * volume_solid(sh.table, C_s) * geom.V_delta / D_p;
    const double D_Hy =
        4.0 * V_g / (2.0 * geom.A_yz + 2.0 * geom.A_wy + A_cl);
    // Area-mixed boundary pressure above the roof cell.
    const auto& ov = geom.roof_overlap[k];
    const double P_mix = (ov[0] * P_kiln + ov[1] * P_r5 + ov[2] * s[k].P +
                          ov[3] * sh.P_env) /
                         geom.A_wz;
    v[k] = darcy_velocity(P_mix - s[k].P, dims.h / 2.0, D_Hy, rho_g, mu_g, f0);
  }
  return v;
}

CoolerUnit::RoofStreams CoolerUnit::roof_outlets(const PlantShared& sh,
                                                 const std::vector<SegState>& s,
                                                 double P_kiln,
                                                 double P_r5) const {
  const std::vector<double> v = roof_velocities(sh, s, P_kiln, P_r5);
  RoofStreams out;
  const int parts[3] = {0, 1, 3};
  Stream* streams[3] = {&out.to_kiln, &out.to_r5, &out.to_env};
  for (int pi = 0; pi < 3; ++pi) {
    const int part = parts[pi];
    const double A_part = dims.roof_areas[part];
    if (!(A_part > 0.0)) continue;
    Stream& st = *streams[pi];
    double v_weight = 0.0;
    for (int k = 0; k < dims.n_segments; ++k) {
      if (v[k] <= 0.0) continue;  // no backflow through the roof
      const double a = geom.roof_overlap[k][part];
      if (!(a > 0.0)) continue;
      const GasVec C_g = clamp0(s[k].C_g);
      for (std::size_t i = 0; i < kNumGases; ++i)
        st.Ng[i] += a * v[k] * C_g[i] / A_part;
      st.Hg += a * v[k] * enthalpy_gas(sh.table, s[k].T[1], C_g) / A_part;
      st.P_up += a * s[k].P / A_part;
      v_weight += a * v[k] / A_part;
    }
    st.v = v_weight;
  }
  return out;
}

Stream CoolerUnit::solids_outlet(const PlantShared& sh,
                                 const std::vector<SegState>& s,
                                 double v_grate) const {
  const int n = dims.n_segments;
  Stream out;
  const SolidVec C_s = clamp0(s[n - 1].C_s);
  for (std::size_t i = 0; i < kNumSolids; ++i) out.Ns[i] = v_grate * C_s[i];
  out.Hs = v_grate * enthalpy_solid(sh.table, s[n - 1].T[0], C_s);
  out.v = v_grate;
  return out;
}

void CoolerUnit::residuals(const PlantShared& sh,
                           const std::vector<SegState>& s,
                           const Stream& solids_in,
                           const std::vector<MolarFeed>& fans, double P_kiln,
                           double P_r5, double v_grate,
                           std::vector<SegDeriv>* dx, double* g,
                           UnitDiag* diag) const {
  const int n = dims.n_segments;
  const double dz = dims.segment_length();
  const double V = geom.V_delta;
  const double A_zface = geom.A_solids_in;  // w*h cross-section

  struct Props {
    SolidVec C_s;
    GasVec C_g;
    double c_g, V_hat_p, V_hat_bulk, V_hat_g, rho_g, rho_seg_s, mu_g, k_g;
    double c_hat_s, c_hat_g;
  };
  std::vector<Props> p(n);
  for (int k = 0; k < n; ++k) {
    p[k].C_s = clamp0(s[k].C_s);
    p[k].C_g = clamp0(s[k].C_g);
    p[k].c_g = sum(p[k].C_g);
    p[k].V_hat_p = volume_solid(sh.table, p[k].C_s);
    p[k].V_hat_bulk = p[k].V_hat_p / (1.0 - porosity);
    p[k].V_hat_g =
        std::max(p[k].c_g * kGasConstant * s[k].T[1] / s[k].P, 1e-3);
    p[k].rho_g = mass_of_gas(sh.table, p[k].C_g) / std::min(p[k].V_hat_g, 1.0);
    p[k].rho_seg_s = mass_of(sh.table, p[k].C_s);
    p[k].mu_g =
        p[k].c_g > 0.0 ? gas_viscosity(sh.table, s[k].T[1], p[k].C_g) : 2e-5;
    p[k].k_g = p[k].c_g > 0.0
                   ? gas_conductivity(sh.table, s[k].T[1], p[k].C_g)
                   : 0.02;
    p[k].c_hat_s = heat_capacity(sh.table, s[k].T[0], p[k].C_s, false);
    p[k].c_hat_g = heat_capacity(sh.table, s[k].T[1], p[k].C_g, true);
  }

  // Solid advection along the grate, faces 0..n.
  std::vector<SolidVec> Ns(n + 1, SolidVec{});
  std::vector<double> Hs(n + 1, 0.0);
  Ns[0] = solids_in.Ns;
  Hs[0] = solids_in.Hs;
  for (int k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < kNumSolids; ++i)
      Ns[k][i] = v_grate * p[k - 1].C_s[i];
    Hs[k] = v_grate * enthalpy_solid(sh.table, s[k - 1].T[0], p[k - 1].C_s);
  }

  // Horizontal gas exchange between segments (end faces closed).
  std::vector<GasVec> Ngz(n + 1, GasVec{});
  std::vector<double> Hgz(n + 1, 0.0);
  for (int k = 1; k < n; ++k) {
    const double A_cl = 6.0 *
                        (0.5 * (p[k - 1].V_hat_p + p[k].V_hat_p)) * V / D_p;
    const double V_g =
        0.5 * (std::min(p[k - 1].V_hat_g, 1.0) + std::min(p[k].V_hat_g, 1.0)) *
        V;
    const double D_Hz =
        4.0 * V_g / (2.0 * geom.A_yz + 2.0 * geom.A_wz + A_cl);
    const double v = darcy_velocity(s[k].P - s[k - 1].P, dz, D_Hz,
                                    0.5 * (p[k - 1].rho_g + p[k].rho_g),
                                    0.5 * (p[k - 1].mu_g + p[k].mu_g), f0);
    const int up = v >= 0.0 ? k - 1 : k;
    for (std::size_t i = 0; i < kNumGases; ++i) Ngz[k][i] = v * p[up].C_g[i];
    Hgz[k] = v * enthalpy_gas(sh.table, s[up].T[1], p[up].C_g);
  }

  // Solid conduction between neighboring beds.
  std::vector<double> q_s(n + 1, 0.0), A_bed_face(n + 1, 0.0);
  for (int k = 1; k < n; ++k) {
    if (!any_solid(p[k - 1].C_s) || !any_solid(p[k].C_s)) continue;
    const double k_lo = bulk_conductivity_with_gas(sh.table, p[k - 1].C_s,
                                                   p[k - 1].k_g, porosity);
    const double k_hi =
        bulk_conductivity_with_gas(sh.table, p[k].C_s, p[k].k_g, porosity);
    q_s[k] = -0.5 * (k_lo + k_hi) * (s[k].T[0] - s[k - 1].T[0]) / dz;
    const double h_bed =
        0.5 * (p[k - 1].V_hat_bulk + p[k].V_hat_bulk) * dims.h;
    A_bed_face[k] = dims.w * std::min(h_bed, dims.h);
  }

  const std::vector<double> v_roof = roof_velocities(sh, s, P_kiln, P_r5);

  for (int k = 0; k < n; ++k) {
    const double T_s = s[k].T[0], T_g = s[k].T[1];
    const auto rates = split_rates(sh, T_s, T_g, s[k].P, p[k].C_s, p[k].C_g);
    const ProductionRates R = production_rates(sh.reactions, rates);
    const double J_sg = calcination_heat(sh.table, T_s, s[k].P, rates[0]);

    SegDeriv& d = (*dx)[k];
    for (std::size_t i = 0; i < kNumSolids; ++i)
      d.dC_s[i] = (A_zface * (Ns[k][i] - Ns[k + 1][i])) / V + R.solids[i];
    for (std::size_t i = 0; i < kNumGases; ++i)
      d.dC_g[i] = (geom.A_yz * (Ngz[k][i] - Ngz[k + 1][i])) / V + R.gases[i];

    // Fan air from below.
    const MolarFeed& fan = fans[k];
    for (std::size_t i = 0; i < kNumGases; ++i) d.dC_g[i] += fan.gases[i] / V;
    const double H_fan = enthalpy_gas(sh.table, fan.T, fan.gases);

    // Roof outflow through the open parts.
    double roof_molar[kNumGases] = {};
    double roof_H = 0.0;
    if (v_roof[k] > 0.0) {
      const auto& ov = geom.roof_overlap[k];
      const double open = ov[0] + ov[1] + ov[3];
      for (std::size_t i = 0; i < kNumGases; ++i)
        roof_molar[i] = open * v_roof[k] * p[k].C_g[i];
      roof_H = open * v_roof[k] * enthalpy_gas(sh.table, T_g, p[k].C_g);
      for (std::size_t i = 0; i < kNumGases; ++i)
        d.dC_g[i] -= roof_molar[i] / V;
    }

    // Packed-bed exchange.
    const double A_p = 6.0 * p[k].V_hat_p * V / D_p;
    double Q_sg = 0.0;
    if (A_p > 0.0 && p[k].c_g > 0.0) {
      const double fan_vol =
          sum(fan.gases) * kGasConstant * T_g / s[k].P;  // local volumetric
      const double v_y = fan_vol / geom.A_wz;
      const double Re = p[k].rho_g * v_y * D_p / p[k].mu_g;
      const double Pr = p[k].rho_seg_s > 0.0
                            ? (p[k].c_hat_s / p[k].rho_seg_s) * p[k].mu_g /
                                  p[k].k_g
                            : 0.7;
      const double k_bed =
          bulk_conductivity_with_gas(sh.table, p[k].C_s, p[k].k_g, porosity);
      const double beta = beta_cooler(Re, Pr, k_bed, D_p);
      Q_sg = A_p * beta * (T_s - T_g);
      const double h_bed = std::min(p[k].V_hat_bulk * dims.h, dims.h);
      const GasRadiation rad =
          gas_emissivity(sh.emissivity_model, T_g, T_s, s[k].P, p[k].C_g,
                         std::max(path_length_cooler(h_bed), 1e-3));
      Q_sg += radiation_pair(geom.A_wz, sh.eps.solid, T_s, rad.eps_g, T_g);
    }

    d.dU[0] = (A_zface * (Hs[k] - Hs[k + 1]) + A_bed_face[k] * q_s[k] -
               A_bed_face[k + 1] * q_s[k + 1] - Q_sg) /
                  V -
              J_sg;
    d.dU[1] =
        (geom.A_yz * (Hgz[k] - Hgz[k + 1]) + H_fan - roof_H + Q_sg) / V +
        J_sg;

    double* gk = g + 3 * k;
    gk[0] = energy_row(s[k].U[0], enthalpy_solid(sh.table, T_s, p[k].C_s));
    gk[1] = energy_row(s[k].U[1], enthalpy_gas(sh.table, T_g, p[k].C_g) -
                                      p[k].c_g * kGasConstant * T_g);
    gk[2] = p[k].V_hat_bulk + p[k].c_g * kGasConstant * T_g / s[k].P - 1.0;
  }
  if (diag) diag->Q_env = 0.0;  // cooler has no modeled walls
}

}  // namespace pyro
