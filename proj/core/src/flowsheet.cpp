#include "pyro/flowsheet.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"

namespace pyro {

namespace {

Stream feed_to_stream(const CompoundTable& table, const MolarFeed& feed,
                      double area) {
  Stream s;
  for (std::size_t i = 0; i < kNumSolids; ++i) s.Ns[i] = feed.solids[i] / area;
  for (std::size_t i = 0; i < kNumGases; ++i) s.Ng[i] = feed.gases[i] / area;
  s.Hs = enthalpy_solid(table, feed.T, feed.solids) / area;
  s.Hg = enthalpy_gas(table, feed.T, feed.gases) / area;
  return s;
}

void record_stream(BoundaryFlows::Entry* e, const Stream& s, double area) {
  for (std::size_t i = 0; i < kNumSolids; ++i) e->solids[i] = area * s.Ns[i];
  for (std::size_t i = 0; i < kNumGases; ++i) e->gases[i] = area * s.Ng[i];
  e->H = area * (s.Hs + s.Hg);
}

void record_feed(BoundaryFlows::Entry* e, const CompoundTable& table,
                 const MolarFeed& feed) {
  e->solids = feed.solids;
  e->gases = feed.gases;
  e->H = enthalpy_solid(table, feed.T, feed.solids) +
         enthalpy_gas(table, feed.T, feed.gases);
}

}  // namespace

std::array<double, kNumElements> BoundaryFlows::element_in() const {
  std::array<double, kNumElements> sums{};
  for (const Entry& e : in)
    for (std::size_t el = 0; el < kNumElements; ++el) {
      for (std::size_t i = 0; i < kNumSolids; ++i)
        sums[el] += kElementMatrix[el][i] * e.solids[i];
      for (std::size_t i = 0; i < kNumGases; ++i)
        sums[el] += kElementMatrix[el][kNumSolids + i] * e.gases[i];
    }
  return sums;
}

std::array<double, kNumElements> BoundaryFlows::element_out() const {
  std::array<double, kNumElements> sums{};
  for (const Entry& e : out)
    for (std::size_t el = 0; el < kNumElements; ++el) {
      for (std::size_t i = 0; i < kNumSolids; ++i)
        sums[el] += kElementMatrix[el][i] * e.solids[i];
      for (std::size_t i = 0; i < kNumGases; ++i)
        sums[el] += kElementMatrix[el][kNumSolids + i] * e.gases[i];
    }
  return sums;
}

double BoundaryFlows::enthalpy_in() const {
  double h = 0.0;
  for (const Entry& e : in) h += e.H;
  return h;
}

double BoundaryFlows::enthalpy_out() const {
  double h = 0.0;
  for (const Entry& e : out) h += e.H;
  return h;
}

GasVec Flowsheet::ambient_molar(double mol_per_s) const {
  GasVec v{};
  for (std::size_t i = 0; i < kNumGases; ++i)
    v[i] = mol_per_s * shared.ambient_mole_frac[i];
  return v;
}

MolarFeed Flowsheet::false_air_feed(int unit) const {
  MolarFeed f;
  f.T = shared.T_env;
  const double mol =
      shared.P_env * false_air_m3s[unit] / (kGasConstant * shared.T_env);
  f.gases = ambient_molar(mol);
  return f;
}

void Flowsheet::finalize() {
  for (int i = 0; i < 5; ++i) {
    cyclones[i].dims.validate(("cy" + std::to_string(i + 1)).c_str());
    risers[i].dims.validate(("r" + std::to_string(i + 1)).c_str());
  }
  calciner.dims.validate("ca");
  kiln.dims.validate("kiln");
  cooler.dims.validate("cooler");
  for (auto& cy : cyclones) cy.init();
  for (auto& r : risers) r.init();
  calciner.init();
  cooler.init();

  layout_ = Layout();
  for (int i = 0; i < 5; ++i)
    layout_.add_unit("cy" + std::to_string(i + 1), UnitKind::Cyclone, 1);
  for (int i = 0; i < 5; ++i)
    layout_.add_unit("r" + std::to_string(i + 1), UnitKind::Duct,
                     risers[i].dims.n_segments);
  layout_.add_unit("ca", UnitKind::Duct, calciner.dims.n_segments);
  layout_.add_unit("kiln", UnitKind::Kiln, kiln.dims.n_segments);
  layout_.add_unit("cooler", UnitKind::Cooler, cooler.dims.n_segments);

  if (boundary.fan_feeds.empty())
    boundary.fan_feeds.assign(cooler.dims.n_segments, MolarFeed{});

  build_sparsity();
}

struct Flowsheet::Ports {
  std::array<Stream, 5> cy_top, cy_bottom, cy_in, cy_eye;
  std::array<Stream, 5> riser_top, riser_fall, riser_in;
  Stream ca_top, ca_in;
  Stream kiln_gas_out, kiln_solids_out, kiln_solid_in, kiln_gas_in;
  CoolerUnit::RoofStreams roof;
  Stream cooler_solids_out, cooler_solid_in;
};

void Flowsheet::compute_ports(const std::vector<std::vector<SegState>>& segs,
                              Ports* P) const {
  const auto& sh = shared;
  auto seg0_P = [&](int u) { return segs[u][0].P; };

  // State-only outlets (each uses only its own state and the neighboring
  // boundary pressure read from z).
  for (int i = 0; i < 4; ++i)
    P->riser_top[i] =
        risers[i].top_outlet(sh, segs[kR1 + i], seg0_P(kCy1 + i));
  P->riser_top[4] = risers[4].top_outlet(sh, segs[kR1 + 4], seg0_P(kCa));
  P->ca_top = calciner.top_outlet(sh, segs[kCa], seg0_P(kCy1 + 4));
  for (int i = 0; i < 5; ++i) {
    const double p_down = i == 0 ? boundary.P_out : seg0_P(kR1 + i - 1);
    P->cy_top[i] = cyclones[i].top_outlet(sh, segs[kCy1 + i][0], p_down);
  }
  P->kiln_gas_out = kiln.gas_outlet(sh, segs[kKiln], seg0_P(kCa));
  P->kiln_solids_out = kiln.solids_outlet(sh, segs[kKiln], boundary.omega);
  const int kiln_end = kiln.dims.n_segments - 1;
  P->roof = cooler.roof_outlets(sh, segs[kCooler], segs[kKiln][kiln_end].P,
                                seg0_P(kR1 + 4));
  P->cooler_solids_out =
      cooler.solids_outlet(sh, segs[kCooler], boundary.v_grate);

  // Cyclone inlets: riser (or calciner) top scaled to A_in, plus false air.
  for (int i = 0; i < 5; ++i) {
    const Stream& src = i == 4 ? P->ca_top : P->riser_top[i];
    const double A_out =
        i == 4 ? calciner.outlet_area() : risers[i].outlet_area();
    Stream in;
    in.add(src, A_out / cyclones[i].dims.A_in);
    in.add(feed_to_stream(sh.table, false_air_feed(kCy1 + i),
                          cyclones[i].dims.A_in),
           1.0);
    P->cy_in[i] = in;
  }

  // Material path: bottoms and fall-throughs resolve in cascade order.
  P->cy_eye[0] = Stream{};
  for (int i = 0; i < 5; ++i) {
    if (i >= 1) {
      // Riser i-1 falls through the eye of cyclone i.
      P->cy_eye[i] = P->riser_fall[i - 1].scaled(risers[i - 1].inlet_area() /
                                                 cyclones[i].geom.A_x);
    }
    const double p_down = i == 0 ? boundary.P_out : seg0_P(kR1 + i - 1);
    P->cy_bottom[i] = cyclones[i].bottom_outlet(
        sh, segs[kCy1 + i][0], P->cy_in[i], P->cy_eye[i], p_down);

    // Riser i inlet after cyclone i's bottom is known.
    Stream in;
    if (i < 4)
      in.add(P->cy_top[i + 1],
             cyclones[i + 1].geom.A_x / risers[i].inlet_area());
    else
      in.add(P->roof.to_r5,
             cooler.roof_part_area(1) / risers[4].inlet_area());
    if (i >= 1 && i <= 3)
      in.add(P->cy_bottom[i - 1],
             cyclones[i - 1].geom.A_d / risers[i].inlet_area());
    if (i == 0)
      in.add(feed_to_stream(sh.table, boundary.meal, risers[0].inlet_area()),
             1.0);
    in.add(feed_to_stream(sh.table, false_air_feed(kR1 + i),
                          risers[i].inlet_area()),
           1.0);
    P->riser_in[i] = in;
    P->riser_fall[i] = risers[i].fall_outlet(sh, segs[kR1 + i], in);
  }

  // Calciner inlet: cyclone 4 meal, kiln gas, tertiary air, false air.
  {
    Stream in;
    in.add(P->cy_bottom[3], cyclones[3].geom.A_d / calciner.inlet_area());
    in.add(P->kiln_gas_out, kiln.end_area() / calciner.inlet_area());
    in.add(P->riser_top[4], risers[4].outlet_area() / calciner.inlet_area());
    in.add(feed_to_stream(sh.table, false_air_feed(kCa),
                          calciner.inlet_area()),
           1.0);
    P->ca_in = in;
  }

  P->kiln_solid_in =
      P->cy_bottom[4].scaled(cyclones[4].geom.A_d / kiln.end_area());
  {
    Stream in;
    in.add(P->roof.to_kiln, cooler.roof_part_area(0) / kiln.end_area());
    in.add(feed_to_stream(sh.table, false_air_feed(kKiln), kiln.end_area()),
           1.0);
    P->kiln_gas_in = in;
  }
  P->cooler_solid_in =
      P->kiln_solids_out.scaled(kiln.end_area() / cooler.geom.A_solids_in);
}

void Flowsheet::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                     Eigen::VectorXd* f, Eigen::VectorXd* g,
                     EvalReport* report) const {
  if (x.size() != n_x() || z.size() != n_z())
    throw Error("Flowsheet::eval: state size mismatch");
  f->resize(n_x());
  g->resize(n_z());

  std::vector<std::vector<SegState>> segs(kNumUnits);
  for (int u = 0; u < kNumUnits; ++u) {
    const int n = layout_.unit(u).n_segments;
    segs[u].resize(n);
    for (int k = 0; k < n; ++k)
      segs[u][k] = layout_.unpack(x.data(), z.data(), u, k);
  }

  Ports ports;
  compute_ports(segs, &ports);

  std::vector<UnitDiag> diags(kNumUnits);

  auto write_unit = [&](int u, const std::vector<SegDeriv>& dx,
                        const double* gu) {
    const int n = layout_.unit(u).n_segments;
    const UnitKind kind = layout_.unit(u).kind;
    const int np = phase_count(kind);
    for (int k = 0; k < n; ++k) {
      double* fx = f->data() + layout_.x_offset(u, k);
      for (std::size_t i = 0; i < kNumSolids; ++i) fx[i] = dx[k].dC_s[i];
      for (std::size_t i = 0; i < kNumGases; ++i)
        fx[kNumSolids + i] = dx[k].dC_g[i];
      for (int p = 0; p < np; ++p) fx[kNumSpecies + p] = dx[k].dU[p];
    }
    const int zs = layout_.z_stride(kind);
    std::copy(gu, gu + n * zs, g->data() + layout_.z_offset(u, 0));
  };

  // Cyclones.
  for (int i = 0; i < 5; ++i) {
    const double p_down =
        i == 0 ? boundary.P_out : segs[kR1 + i - 1][0].P;
    std::vector<SegDeriv> dx(1);
    double gu[4];
    cyclones[i].residuals(shared, segs[kCy1 + i][0], ports.cy_in[i],
                          ports.cy_eye[i], p_down, &dx[0], gu,
                          &diags[kCy1 + i]);
    write_unit(kCy1 + i, dx, gu);
  }

  // Risers.
  for (int i = 0; i < 5; ++i) {
    const int n = risers[i].dims.n_segments;
    std::vector<SegDeriv> dx(n);
    std::vector<double> gu(4 * n);
    const double p_down =
        i < 4 ? segs[kCy1 + i][0].P : segs[kCa][0].P;
    risers[i].residuals(shared, segs[kR1 + i], ports.riser_in[i], {}, p_down,
                        &dx, gu.data(), &diags[kR1 + i]);
    write_unit(kR1 + i, dx, gu.data());
  }

  // Calciner with its fuel injection.
  {
    const int n = calciner.dims.n_segments;
    std::vector<SegDeriv> dx(n);
    std::vector<double> gu(4 * n);
    calciner.residuals(shared, segs[kCa], ports.ca_in,
                       {boundary.calciner_fuel}, segs[kCy1 + 4][0].P, &dx,
                       gu.data(), &diags[kCa]);
    write_unit(kCa, dx, gu.data());
  }

  // Kiln with fuel and primary air at the burner end.
  {
    const int n = kiln.dims.n_segments;
    std::vector<SegDeriv> dx(n);
    std::vector<double> gu(5 * n);
    kiln.residuals(shared, segs[kKiln], ports.kiln_solid_in,
                   ports.kiln_gas_in,
                   {boundary.kiln_fuel, boundary.primary_air}, segs[kCa][0].P,
                   boundary.omega, &dx, gu.data(), &diags[kKiln]);
    write_unit(kKiln, dx, gu.data());
  }

  // Cooler.
  {
    const int n = cooler.dims.n_segments;
    std::vector<SegDeriv> dx(n);
    std::vector<double> gu(3 * n);
    cooler.residuals(shared, segs[kCooler], ports.cooler_solid_in,
                     boundary.fan_feeds, segs[kKiln][kiln.dims.n_segments - 1].P,
                     segs[kR1 + 4][0].P, boundary.v_grate, &dx, gu.data(),
                     &diags[kCooler]);
    write_unit(kCooler, dx, gu.data());
  }

  for (int i = 0; i < n_x(); ++i)
    if (!std::isfinite((*f)(i)))
      throw Error("non-finite derivative at " + layout_.x_name(i));
  for (int i = 0; i < n_z(); ++i)
    if (!std::isfinite((*g)(i)))
      throw Error("non-finite algebraic residual at " + layout_.z_name(i));

  if (report) {
    report->unit_diag = diags;
    BoundaryFlows& bf = report->flows;
    bf.in.clear();
    bf.out.clear();
    bf.Q_env = 0.0;
    for (const UnitDiag& d : diags) bf.Q_env += d.Q_env;

    auto push_feed = [&](const std::string& name, const MolarFeed& feed) {
      if (feed.empty()) return;
      BoundaryFlows::Entry e;
      e.name = name;
      record_feed(&e, shared.table, feed);
      bf.in.push_back(e);
    };
    push_feed("meal", boundary.meal);
    push_feed("calciner_fuel", boundary.calciner_fuel);
    push_feed("kiln_fuel", boundary.kiln_fuel);
    push_feed("primary_air", boundary.primary_air);
    for (int k = 0; k < cooler.dims.n_segments; ++k)
      push_feed("fan" + std::to_string(k + 1), boundary.fan_feeds[k]);
    for (int u = 0; u < kNumUnits; ++u)
      push_feed("false_air." + layout_.unit(u).name, false_air_feed(u));

    report->port_mass.assign(kNumUnits, PortMass{});
    auto s_mass = [&](const SolidVec& N) {
      double m = 0.0;
      for (std::size_t i = 0; i < kNumSolids; ++i)
        m += N[i] * shared.table.species(i).molar_mass;
      return m;
    };
    auto g_mass = [&](const GasVec& N) {
      double m = 0.0;
      for (std::size_t i = 0; i < kNumGases; ++i)
        m += N[i] * shared.table.species(kNumSolids + i).molar_mass;
      return m;
    };
    auto feed_mass = [&](const MolarFeed& f, double* solid, double* gas) {
      *solid += s_mass(f.solids);
      *gas += g_mass(f.gases);
    };
    for (int i = 0; i < 5; ++i) {
      PortMass& pm = report->port_mass[kCy1 + i];
      pm.solids_in = cyclones[i].dims.A_in * s_mass(ports.cy_in[i].Ns) +
                     cyclones[i].geom.A_x * s_mass(ports.cy_eye[i].Ns);
      pm.gas_in = cyclones[i].dims.A_in * g_mass(ports.cy_in[i].Ng);
      pm.solids_out = cyclones[i].geom.A_x * s_mass(ports.cy_top[i].Ns) +
                      cyclones[i].geom.A_d * s_mass(ports.cy_bottom[i].Ns);
      pm.gas_out = cyclones[i].geom.A_x * g_mass(ports.cy_top[i].Ng);
      PortMass& pr = report->port_mass[kR1 + i];
      pr.solids_in = risers[i].inlet_area() * s_mass(ports.riser_in[i].Ns);
      pr.gas_in = risers[i].inlet_area() * g_mass(ports.riser_in[i].Ng);
      pr.solids_out =
          risers[i].outlet_area() * s_mass(ports.riser_top[i].Ns) +
          risers[i].inlet_area() * s_mass(ports.riser_fall[i].Ns);
      pr.gas_out = risers[i].outlet_area() * g_mass(ports.riser_top[i].Ng);
    }
    {
      PortMass& pm = report->port_mass[kCa];
      pm.solids_in = calciner.inlet_area() * s_mass(ports.ca_in.Ns);
      pm.gas_in = calciner.inlet_area() * g_mass(ports.ca_in.Ng);
      feed_mass(boundary.calciner_fuel, &pm.solids_in, &pm.gas_in);
      pm.solids_out = calciner.outlet_area() * s_mass(ports.ca_top.Ns);
      pm.gas_out = calciner.outlet_area() * g_mass(ports.ca_top.Ng);
    }
    {
      PortMass& pm = report->port_mass[kKiln];
      pm.solids_in = kiln.end_area() * s_mass(ports.kiln_solid_in.Ns);
      pm.gas_in = kiln.end_area() * g_mass(ports.kiln_gas_in.Ng);
      feed_mass(boundary.kiln_fuel, &pm.solids_in, &pm.gas_in);
      feed_mass(boundary.primary_air, &pm.solids_in, &pm.gas_in);
      pm.solids_out = kiln.end_area() * s_mass(ports.kiln_solids_out.Ns);
      pm.gas_out = kiln.end_area() * g_mass(ports.kiln_gas_out.Ng);
    }
    {
      PortMass& pm = report->port_mass[kCooler];
      pm.solids_in = cooler.geom.A_solids_in * s_mass(ports.cooler_solid_in.Ns);
      for (const MolarFeed& fan : boundary.fan_feeds)
        pm.gas_in += g_mass(fan.gases);
      pm.solids_out =
          cooler.geom.A_solids_in * s_mass(ports.cooler_solids_out.Ns);
      pm.gas_out = cooler.roof_part_area(0) * g_mass(ports.roof.to_kiln.Ng) +
                   cooler.roof_part_area(1) * g_mass(ports.roof.to_r5.Ng) +
                   cooler.roof_part_area(3) * g_mass(ports.roof.to_env.Ng);
    }

    BoundaryFlows::Entry exhaust;
    exhaust.name = "exhaust";
    record_stream(&exhaust, ports.cy_top[0], cyclones[0].geom.A_x);
    bf.out.push_back(exhaust);
    BoundaryFlows::Entry clinker;
    clinker.name = "clinker";
    record_stream(&clinker, ports.cooler_solids_out, cooler.geom.A_solids_in);
    bf.out.push_back(clinker);
    BoundaryFlows::Entry vent;
    vent.name = "cooler_vent";
    record_stream(&vent, ports.roof.to_env, cooler.roof_part_area(3));
    bf.out.push_back(vent);
  }
}

ElementAudit Flowsheet::element_balance_audit(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& z) const {
  Eigen::VectorXd f, g;
  EvalReport report;
  eval(x, z, &f, &g, &report);

  ElementAudit audit;
  audit.in = report.flows.element_in();
  audit.out = report.flows.element_out();

  // Accumulation: sum over segments of V dC/dt (and V dU/dt for energy).
  for (int u = 0; u < kNumUnits; ++u) {
    const Layout::UnitInfo& info = layout_.unit(u);
    for (int k = 0; k < info.n_segments; ++k) {
      double V = 0.0;
      switch (u) {
        case kCa:
          V = calciner.seg[k].V_delta;
          break;
        case kKiln:
          V = kiln.dims.cross_area() * kiln.dims.segment_length();
          break;
        case kCooler:
          V = cooler.geom.V_delta;
          break;
        default:
          V = u < 5 ? cyclones[u].geom.V_delta
                    : risers[u - kR1].seg[k].V_delta;
      }
      const double* fx = f.data() + layout_.x_offset(u, k);
      for (std::size_t el = 0; el < kNumElements; ++el) {
        double acc = 0.0;
        for (std::size_t i = 0; i < kNumSpecies; ++i)
          acc += kElementMatrix[el][i] * fx[i];
        audit.accumulation[el] += V * acc;
      }
      const int np = phase_count(info.kind);
      double V_phase[kMaxPhases] = {V, V, V};
      if (info.kind == UnitKind::Cyclone) {
        V_phase[1] = cyclones[u].geom.V_r;
        V_phase[2] = cyclones[u].geom.V_w;
      } else if (info.kind == UnitKind::Duct) {
        const DuctUnit& duct = u == kCa ? calciner : risers[u - kR1];
        V_phase[1] = duct.seg[k].V_r;
        V_phase[2] = duct.seg[k].V_w;
      } else if (info.kind == UnitKind::Kiln) {
        V_phase[2] = kPi *
                     (kiln.dims.r_r * kiln.dims.r_r -
                      kiln.dims.r_c * kiln.dims.r_c) *
                     kiln.dims.segment_length();
      }
      for (int p = 0; p < np; ++p)
        audit.energy_accumulation += V_phase[p] * fx[kNumSpecies + p];
    }
  }

  for (std::size_t el = 0; el < kNumElements; ++el) {
    audit.imbalance[el] =
        audit.in[el] - audit.out[el] - audit.accumulation[el];
    const double scale = std::max(audit.in[el], audit.out[el]);
    audit.relative_imbalance[el] =
        scale > 0.0 ? audit.imbalance[el] / scale : audit.imbalance[el];
  }
  audit.energy_in = report.flows.enthalpy_in();
  audit.energy_out = report.flows.enthalpy_out();
  audit.energy_env = report.flows.Q_env;
  audit.energy_imbalance = audit.energy_in - audit.energy_out -
                           audit.energy_env - audit.energy_accumulation;
  return audit;
}

Eigen::VectorXd Flowsheet::consistent_z(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z(n_z());
  for (int u = 0; u < kNumUnits; ++u) {
    const Layout::UnitInfo& info = layout_.unit(u);
    for (int k = 0; k < info.n_segments; ++k) {
      SegState s = layout_.unpack(x.data(), z.data(), u, k);
      const bool mixture = info.kind == UnitKind::Cyclone ||
                           info.kind == UnitKind::Duct;
      double porosity = 0.0;
      if (info.kind == UnitKind::Kiln) porosity = kiln.porosity;
      if (info.kind == UnitKind::Cooler) porosity = cooler.porosity;
      if (mixture) {
        s.T[0] = temperature_from_energy(shared.table, PhaseKind::Mixture,
                                         s.U[0], s.C_s, s.C_g);
        s.T[1] = shared.refractory.temperature(s.U[1]);
        s.T[2] = shared.shell.temperature(s.U[2]);
      } else {
        s.T[0] = temperature_from_energy(shared.table, PhaseKind::Solid,
                                         s.U[0], s.C_s, s.C_g);
        s.T[1] = temperature_from_energy(shared.table, PhaseKind::Gas, s.U[1],
                                         s.C_s, s.C_g);
        if (info.kind == UnitKind::Kiln)
          s.T[2] = shared.refractory.temperature(s.U[2]);
      }
      SolidVec cs{};
      GasVec cg{};
      for (std::size_t i = 0; i < kNumSolids; ++i)
        cs[i] = std::max(s.C_s[i], 0.0);
      double c_g = 0.0;
      for (std::size_t i = 0; i < kNumGases; ++i)
        c_g += std::max(s.C_g[i], 0.0);
      (void)cg;
      const double V_hat_s = volume_solid(shared.table, cs, porosity);
      const double T_gas = mixture ? s.T[0] : s.T[1];
      if (V_hat_s >= 1.0)
        throw Error("consistent_z: solids overfill segment " +
                    info.name + "[" + std::to_string(k) + "]");
      s.P = c_g * kGasConstant * T_gas / (1.0 - V_hat_s);
      if (info.kind == UnitKind::Kiln)
        s.theta = kiln_fill_angle(V_hat_s * kiln.dims.cross_area(),
                                  kiln.dims.r_c);
      layout_.pack_z(s, u, k, z.data());
    }
  }
  return z;
}

void Flowsheet::build_sparsity() {
  std::set<std::pair<int, int>> pairs;
  auto blk = [&](int u, int k) { return layout_.block_index(u, k); };
  auto add = [&](int a, int b) {
    pairs.insert({a, b});
    pairs.insert({b, a});
  };

  // Intra-unit tridiagonal coupling.
  for (int u = 0; u < kNumUnits; ++u) {
    const int n = layout_.unit(u).n_segments;
    for (int k = 0; k < n; ++k) {
      add(blk(u, k), blk(u, k));
      if (k + 1 < n) add(blk(u, k), blk(u, k + 1));
      // Kiln bed slope uses central differences of h(theta).
      if (layout_.unit(u).kind == UnitKind::Kiln && k + 2 < n)
        add(blk(u, k), blk(u, k + 2));
    }
  }

  // Port dependency sets at block granularity, resolved in cascade order
  // exactly like compute_ports.
  using Deps = std::set<int>;
  auto merge = [](Deps& into, const Deps& from) {
    into.insert(from.begin(), from.end());
  };

  std::array<Deps, 5> cy_top_deps, cy_bottom_deps, riser_top_deps,
      riser_fall_deps, riser_in_deps, cy_in_deps;
  const int kiln_end = kiln.dims.n_segments - 1;

  for (int i = 0; i < 5; ++i) {
    riser_top_deps[i] = {blk(kR1 + i, risers[i].dims.n_segments - 1)};
    riser_top_deps[i].insert(i < 4 ? blk(kCy1 + i, 0) : blk(kCa, 0));
    cy_top_deps[i] = {blk(kCy1 + i, 0)};
    if (i > 0) cy_top_deps[i].insert(blk(kR1 + i - 1, 0));
  }
  Deps ca_top_deps = {blk(kCa, calciner.dims.n_segments - 1),
                      blk(kCy1 + 4, 0)};
  Deps kiln_gas_out_deps = {blk(kKiln, 0), blk(kCa, 0)};
  Deps kiln_solids_out_deps = {blk(kKiln, kiln_end)};
  if (kiln_end > 0) kiln_solids_out_deps.insert(blk(kKiln, kiln_end - 1));
  Deps roof_kiln_deps, roof_r5_deps;
  for (int k = 0; k < cooler.dims.n_segments; ++k) {
    if (cooler.geom.roof_overlap[k][0] > 0.0)
      roof_kiln_deps.insert(blk(kCooler, k));
    if (cooler.geom.roof_overlap[k][1] > 0.0)
      roof_r5_deps.insert(blk(kCooler, k));
  }
  roof_kiln_deps.insert(blk(kKiln, kiln_end));
  roof_kiln_deps.insert(blk(kR1 + 4, 0));
  roof_r5_deps.insert(blk(kKiln, kiln_end));
  roof_r5_deps.insert(blk(kR1 + 4, 0));

  for (int i = 0; i < 5; ++i) {
    cy_in_deps[i] = i == 4 ? ca_top_deps : riser_top_deps[i];
    cy_in_deps[i].insert(blk(kCy1 + i, 0));
  }
  // Cascade mirrors compute_ports: bottoms and fall-throughs chain down the
  // material path, so dependency sets accumulate transitively.
  cy_bottom_deps[0] = cy_in_deps[0];
  for (int i = 0; i < 5; ++i) {
    riser_in_deps[i] = {blk(kR1 + i, 0)};
    if (i < 4)
      merge(riser_in_deps[i], cy_top_deps[i + 1]);
    else
      merge(riser_in_deps[i], roof_r5_deps);
    if (i >= 1 && i <= 3) merge(riser_in_deps[i], cy_bottom_deps[i - 1]);
    riser_fall_deps[i] = riser_in_deps[i];
    if (i + 1 < 5) {
      cy_bottom_deps[i + 1] = cy_in_deps[i + 1];
      merge(cy_bottom_deps[i + 1], riser_fall_deps[i]);
    }
  }

  // Consumers: rows of the receiving segment depend on the source port.
  auto couple = [&](int u, int k, const Deps& deps) {
    for (int d : deps) add(blk(u, k), d);
  };
  for (int i = 0; i < 5; ++i) {
    couple(kCy1 + i, 0, cy_in_deps[i]);
    if (i >= 1) couple(kCy1 + i, 0, riser_fall_deps[i - 1]);
    couple(kR1 + i, 0, riser_in_deps[i]);
    // Outlet pressure feedback.
    couple(kR1 + i, risers[i].dims.n_segments - 1,
           {i < 4 ? blk(kCy1 + i, 0) : blk(kCa, 0)});
  }
  Deps ca_in_deps = cy_bottom_deps[3];
  merge(ca_in_deps, kiln_gas_out_deps);
  merge(ca_in_deps, riser_top_deps[4]);
  couple(kCa, 0, ca_in_deps);
  couple(kCa, calciner.dims.n_segments - 1, {blk(kCy1 + 4, 0)});
  couple(kKiln, 0, {blk(kCa, 0)});
  couple(kKiln, 0, cy_bottom_deps[4]);
  couple(kKiln, kiln_end, roof_kiln_deps);
  couple(kCooler, 0, kiln_solids_out_deps);
  for (int k = 0; k < cooler.dims.n_segments; ++k)
    couple(kCooler, k, {blk(kKiln, kiln_end), blk(kR1 + 4, 0)});

  block_pattern_.assign(pairs.begin(), pairs.end());

  // Distance-2 greedy coloring over column blocks: two blocks conflict when
  // some row block depends on both.
  const int nb = layout_.n_blocks();
  std::vector<std::set<int>> row_to_cols(nb);
  for (const auto& [r, c] : block_pattern_) row_to_cols[r].insert(c);
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of(nb, -1);
  for (int b = 0; b < nb; ++b) {
    for (std::size_t gi = 0; gi <= groups.size(); ++gi) {
      if (gi == groups.size()) groups.push_back({});
      bool ok = true;
      for (const auto& cols : row_to_cols) {
        if (!cols.count(b)) continue;
        for (int other : groups[gi])
          if (cols.count(other)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok) {
        groups[gi].push_back(b);
        group_of[b] = static_cast<int>(gi);
        break;
      }
    }
  }

  // Expand block groups into global column colors (x columns then z
  // columns appended after n_x).
  color_groups_.clear();
  std::vector<std::pair<int, int>> block_to_useg(nb);
  for (int u = 0, b = 0; u < kNumUnits; ++u)
    for (int k = 0; k < layout_.unit(u).n_segments; ++k, ++b)
      block_to_useg[b] = {u, k};
  for (const auto& group : groups) {
    int max_cols = 0;
    for (int b : group) {
      const auto [u, k] = block_to_useg[b];
      const UnitKind kind = layout_.unit(u).kind;
      max_cols = std::max(max_cols,
                          layout_.x_stride(kind) + layout_.z_stride(kind));
    }
    for (int q = 0; q < max_cols; ++q) {
      std::vector<int> color;
      for (int b : group) {
        const auto [u, k] = block_to_useg[b];
        const UnitKind kind = layout_.unit(u).kind;
        const int xs = layout_.x_stride(kind);
        const int zs = layout_.z_stride(kind);
        if (q < xs)
          color.push_back(layout_.x_offset(u, k) + q);
        else if (q < xs + zs)
          color.push_back(n_x() + layout_.z_offset(u, k) + (q - xs));
      }
      if (!color.empty()) color_groups_.push_back(std::move(color));
    }
  }
}

}  // namespace pyro
