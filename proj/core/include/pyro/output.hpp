#pragma once

#include <string>
#include <vector>

#include "pyro/flowsheet.hpp"
#include "pyro/scenario.hpp"

namespace pyro {

// Derived steady-state quantities for the summary report.
struct SteadySummary {
  double clinker_kg_s = 0.0;
  SolidVec clinker_wt{};              // mass %
  GasVec exhaust_vol{};               // vol %
  std::array<double, 5> cyclone_eta{};  // total separation efficiency [-]
  std::vector<double> kiln_T_s_C, kiln_T_g_C;
  std::vector<double> cooler_T_s_C, cooler_T_g_C;
  double heat_kiln_kcal_kg = 0.0;
  double heat_calciner_kcal_kg = 0.0;
  double exhaust_kg_s = 0.0;
  double dust_loss_kg_s = 0.0;
};

SteadySummary summarize(const Flowsheet& fs, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& z, double lhv_MJ_kg);

// Per-unit time-series CSV files (one per unit, header row mandatory).
class CsvWriter {
 public:
  CsvWriter(const Flowsheet& fs, const std::string& out_dir);
  void write(double t, const Eigen::VectorXd& x, const Eigen::VectorXd& z);

 private:
  const Flowsheet& fs_;
  std::vector<std::string> paths_;
};

void write_report(const std::string& path, const SteadySummary& summary,
                  const ElementAudit& audit);
void write_manifest(const std::string& path, const ScenarioConfig& config,
                    const Flowsheet& fs);

// State snapshots for warm restarts.
void save_state(const std::string& path, const Eigen::VectorXd& x,
                const Eigen::VectorXd& z);
bool load_state(const std::string& path, Eigen::VectorXd* x,
                Eigen::VectorXd* z);

std::string audit_text(const ElementAudit& audit);

}  // namespace pyro
