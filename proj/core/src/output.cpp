#include "pyro/output.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"

namespace pyro {

SteadySummary summarize(const Flowsheet& fs, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& z, double lhv_MJ_kg) {
  Eigen::VectorXd f, g;
  EvalReport rep;
  fs.eval(x, z, &f, &g, &rep);

  SteadySummary s;
  const CompoundTable& table = fs.shared.table;
  for (const BoundaryFlows::Entry& e : rep.flows.out) {
    if (e.name == "clinker") {
      double mass = 0.0;
      for (std::size_t i = 0; i < kNumSolids; ++i)
        mass += e.solids[i] * table.species(i).molar_mass;
      s.clinker_kg_s = mass;
      for (std::size_t i = 0; i < kNumSolids; ++i)
        s.clinker_wt[i] = mass > 0.0 ? 100.0 * e.solids[i] *
                                           table.species(i).molar_mass / mass
                                     : 0.0;
    } else if (e.name == "exhaust") {
      double mol = 0.0, mass = 0.0;
      for (double v : e.gases) mol += v;
      for (std::size_t i = 0; i < kNumGases; ++i) {
        mass += e.gases[i] * table.species(kNumSolids + i).molar_mass;
        s.exhaust_vol[i] = e.gases[i];
      }
      for (std::size_t i = 0; i < kNumSolids; ++i) {
        mass += e.solids[i] * table.species(i).molar_mass;
        s.dust_loss_kg_s += e.solids[i] * table.species(i).molar_mass;
      }
      s.exhaust_kg_s = mass;
      for (double& v : s.exhaust_vol) v = mol > 0.0 ? 100.0 * v / mol : 0.0;
    }
  }
  for (int i = 0; i < 5; ++i)
    s.cyclone_eta[i] = rep.unit_diag[Flowsheet::kCy1 + i].eta_total;

  const Layout& layout = fs.layout();
  const int ku = Flowsheet::kKiln;
  for (int k = 0; k < fs.kiln.dims.n_segments; ++k) {
    const SegState seg = layout.unpack(x.data(), z.data(), ku, k);
    s.kiln_T_s_C.push_back(kelvin_to_celsius(seg.T[0]));
    s.kiln_T_g_C.push_back(kelvin_to_celsius(seg.T[1]));
  }
  for (int k = 0; k < fs.cooler.dims.n_segments; ++k) {
    const SegState seg =
        layout.unpack(x.data(), z.data(), Flowsheet::kCooler, k);
    s.cooler_T_s_C.push_back(kelvin_to_celsius(seg.T[0]));
    s.cooler_T_g_C.push_back(kelvin_to_celsius(seg.T[1]));
  }

  const double kcal = 4184.0;
  auto fuel_mass = [&](const MolarFeed& feed) {
    return feed.mass_flow(table);
  };
  if (s.clinker_kg_s > 0.0) {
    s.heat_kiln_kcal_kg = fuel_mass(fs.boundary.kiln_fuel) * lhv_MJ_kg * 1e6 /
                          (s.clinker_kg_s * kcal);
    s.heat_calciner_kcal_kg = fuel_mass(fs.boundary.calciner_fuel) *
                              lhv_MJ_kg * 1e6 / (s.clinker_kg_s * kcal);
  }
  return s;
}

CsvWriter::CsvWriter(const Flowsheet& fs, const std::string& out_dir)
    : fs_(fs) {
  namespace fsys = std::filesystem;
  fsys::create_directories(out_dir);
  const Layout& layout = fs.layout();
  for (int u = 0; u < layout.n_units(); ++u) {
    const Layout::UnitInfo& info = layout.unit(u);
    const std::string path = out_dir + "/" + info.name + ".csv";
    paths_.push_back(path);
    std::ofstream out(path);
    if (!out) throw Error("cannot create " + path);
    out << "time_s,segment";
    for (std::size_t i = 0; i < kNumSolids; ++i)
      out << ",C_s." << kSolidNames[i];
    for (std::size_t i = 0; i < kNumGases; ++i) out << ",C_g." << kGasNames[i];
    const bool mixture =
        info.kind == UnitKind::Cyclone || info.kind == UnitKind::Duct;
    if (mixture)
      out << ",T_m_K,T_r_K,T_w_K";
    else if (info.kind == UnitKind::Kiln)
      out << ",T_s_K,T_g_K,T_r_K";
    else
      out << ",T_s_K,T_g_K";
    out << ",P_Pa";
    if (info.kind == UnitKind::Kiln) out << ",theta_rad";
    out << ",solids_in_kg_s,gas_in_kg_s,solids_out_kg_s,gas_out_kg_s\n";
  }
}

void CsvWriter::write(double t, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& z) {
  Eigen::VectorXd f, g;
  EvalReport rep;
  fs_.eval(x, z, &f, &g, &rep);
  const Layout& layout = fs_.layout();
  for (int u = 0; u < layout.n_units(); ++u) {
    const Layout::UnitInfo& info = layout.unit(u);
    std::ofstream out(paths_[u], std::ios::app);
    out << std::setprecision(10);
    for (int k = 0; k < info.n_segments; ++k) {
      const SegState s = layout.unpack(x.data(), z.data(), u, k);
      out << t << ',' << k;
      for (double v : s.C_s) out << ',' << v;
      for (double v : s.C_g) out << ',' << v;
      const int np = phase_count(info.kind);
      for (int p = 0; p < np; ++p) out << ',' << s.T[p];
      out << ',' << s.P;
      if (info.kind == UnitKind::Kiln) out << ',' << s.theta;
      const PortMass& pm = rep.port_mass[u];
      out << ',' << pm.solids_in << ',' << pm.gas_in << ',' << pm.solids_out
          << ',' << pm.gas_out << '\n';
    }
  }
}

std::string audit_text(const ElementAudit& audit) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3);
  os << "element   in[mol/s]      out[mol/s]     accum[mol/s]   "
        "imbalance      relative\n";
  for (std::size_t e = 0; e < kNumElements; ++e) {
    os << std::left << std::setw(10) << kElementNames[e] << std::right
       << std::setw(14) << audit.in[e] << ' ' << std::setw(14) << audit.out[e]
       << ' ' << std::setw(14) << audit.accumulation[e] << ' ' << std::setw(14)
       << audit.imbalance[e] << ' ' << std::setw(14)
       << audit.relative_imbalance[e] << '\n';
  }
  os << "energy: in " << audit.energy_in * 1e-6 << " MW, out "
     << audit.energy_out * 1e-6 << " MW, environment "
     << audit.energy_env * 1e-6 << " MW, accumulation "
     << audit.energy_accumulation * 1e-6 << " MW, imbalance "
     << audit.energy_imbalance * 1e-6 << " MW\n";
  return os.str();
}

void write_report(const std::string& path, const SteadySummary& s,
                  const ElementAudit& audit) {
  std::ofstream out(path);
  if (!out) throw Error("cannot create " + path);
  out << std::fixed << std::setprecision(2);
  out << "steady-state summary\n====================\n\n";
  out << "clinker production: " << s.clinker_kg_s << " kg/s\n";
  out << "clinker composition [wt%]:\n";
  for (std::size_t i = 0; i < kNumSolids; ++i)
    out << "  " << kSolidNames[i] << ": " << s.clinker_wt[i] << '\n';
  out << "\nexhaust gas (above cyclone 1) [vol%]:\n";
  for (std::size_t i = 0; i < kNumGases; ++i)
    out << "  " << kGasNames[i] << ": " << s.exhaust_vol[i] << '\n';
  out << "  dust loss with exhaust: " << s.dust_loss_kg_s << " kg/s\n";
  out << "\ncyclone separation efficiencies [wt%]:\n  ";
  for (int i = 0; i < 5; ++i) out << 100.0 * s.cyclone_eta[i] << (i < 4 ? " / " : "\n");
  out << "\nkiln solid temperatures [C]: ";
  for (double T : s.kiln_T_s_C) out << T << ' ';
  out << "\nkiln gas temperatures [C]:   ";
  for (double T : s.kiln_T_g_C) out << T << ' ';
  out << "\ncooler solid temperatures [C]: ";
  for (double T : s.cooler_T_s_C) out << T << ' ';
  out << "\ncooler gas temperatures [C]:   ";
  for (double T : s.cooler_T_g_C) out << T << ' ';
  out << "\n\nspecific heat consumption (fuel mass flow x LHV / clinker):\n";
  out << "  kiln:     " << s.heat_kiln_kcal_kg << " kcal/kg clinker\n";
  out << "  calciner: " << s.heat_calciner_kcal_kg << " kcal/kg clinker\n";
  out << "  (LHV is a configured reporting value, not a measured one)\n";
  out << "\nnote: the cooling-air split percentages are normalized to the\n"
         "total cooler air flow (the nominal 28/27/27/27/27 sums to 136%).\n";
  out << "\nconservation audit\n------------------\n" << audit_text(audit);
}

void write_manifest(const std::string& path, const ScenarioConfig& config,
                    const Flowsheet& fs) {
  nlohmann::json j;
  j["config_hash"] = config.config_hash();
  j["n_x"] = fs.n_x();
  j["n_z"] = fs.n_z();
  j["species"] = kNumSpecies;
  j["reactions"] = kNumReactions;
  j["kinetics_profile"] = config.kinetics_profile;
  std::ofstream out(path);
  if (!out) throw Error("cannot create " + path);
  out << j.dump(2) << '\n';
}

void save_state(const std::string& path, const Eigen::VectorXd& x,
                const Eigen::VectorXd& z) {
  nlohmann::json j;
  j["x"] = std::vector<double>(x.data(), x.data() + x.size());
  j["z"] = std::vector<double>(z.data(), z.data() + z.size());
  std::ofstream out(path);
  if (!out) throw Error("cannot create " + path);
  out << std::setprecision(17) << j << '\n';
}

bool load_state(const std::string& path, Eigen::VectorXd* x,
                Eigen::VectorXd* z) {
  std::ifstream in(path);
  if (!in) return false;
  nlohmann::json j;
  in >> j;
  const auto xv = j.at("x").get<std::vector<double>>();
  const auto zv = j.at("z").get<std::vector<double>>();
  *x = Eigen::Map<const Eigen::VectorXd>(xv.data(), xv.size());
  *z = Eigen::Map<const Eigen::VectorXd>(zv.data(), zv.size());
  return true;
}

}  // namespace pyro
