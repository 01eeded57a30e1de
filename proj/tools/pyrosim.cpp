// Command-line front end: steady-state solve, transient simulation and
// conservation audit of the clinker pyro-process model.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "pyro/error.hpp"
#include "pyro/output.hpp"
#include "pyro/scenario.hpp"
#include "pyro/solver.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string init_state;
  std::string profile;
};

pyro::ScenarioConfig load_config(const CommonArgs& args) {
  pyro::ScenarioConfig cfg = args.config_path.empty()
                                 ? pyro::ScenarioConfig::defaults()
                                 : pyro::ScenarioConfig::load(args.config_path);
  if (!args.profile.empty()) cfg.kinetics_profile = args.profile;
  return cfg;
}

// Steady state from a saved snapshot when provided, otherwise from the
// built-in ignition profile.
void obtain_steady(pyro::Flowsheet& fs, pyro::DaeSolver& solver,
                   const CommonArgs& args, Eigen::VectorXd* x,
                   Eigen::VectorXd* z) {
  if (!args.init_state.empty()) {
    if (!pyro::load_state(args.init_state, x, z))
      throw pyro::Error("cannot read init state " + args.init_state);
    if (x->size() != fs.n_x() || z->size() != fs.n_z())
      throw pyro::Error("init state size does not match this configuration");
    solver.solve_steady(x, z);
    return;
  }
  pyro::apply_initial_profile(fs, "ignition", x);
  *z = fs.consistent_z(*x);
  solver.solve_steady(x, z);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pyrosim - dynamic simulator of the clinker pyro-process"};
  app.require_subcommand(1);

  CommonArgs args;
  double t_end_hours = 35.0;
  double report_interval = -1.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "scenario file (JSON)");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--init-state", args.init_state,
                    "state snapshot to start from (state.json)");
    cmd->add_option("--profile", args.profile,
                    "rate-coefficient set: default | spang")
        ->check(CLI::IsMember({"default", "spang"}));
  };

  CLI::App* steady = app.add_subcommand(
      "steady", "solve the scenario steady state and write the summary");
  add_common(steady);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run the scheduled transient from the steady state");
  add_common(simulate);
  simulate->add_option("--t-end", t_end_hours, "end time [hours]");
  simulate->add_option("--report-interval", report_interval,
                       "CSV reporting interval [s]");

  CLI::App* audit = app.add_subcommand(
      "audit", "element/energy closure check at the steady state");
  add_common(audit);

  CLI11_PARSE(app, argc, argv);

  try {
    pyro::ScenarioConfig cfg = load_config(args);
    std::shared_ptr<pyro::Flowsheet> fs = cfg.build();
    pyro::DaeSolver solver(*fs, cfg.solver);
    std::filesystem::create_directories(args.out_dir);

    Eigen::VectorXd x, z;
    obtain_steady(*fs, solver, args, &x, &z);
    pyro::save_state(args.out_dir + "/state.json", x, z);

    const pyro::SteadySummary summary =
        pyro::summarize(*fs, x, z, cfg.report.lhv_MJ_kg);
    const pyro::ElementAudit audit_result = fs->element_balance_audit(x, z);
    pyro::write_manifest(args.out_dir + "/manifest.json", cfg, *fs);

    if (steady->parsed()) {
      pyro::CsvWriter csv(*fs, args.out_dir);
      csv.write(0.0, x, z);
      pyro::write_report(args.out_dir + "/report.txt", summary, audit_result);
      std::cout << "steady state written to " << args.out_dir
                << " (clinker free lime "
                << summary.clinker_wt[pyro::idx(pyro::Solid::CaO)]
                << " wt%, exhaust CO2 "
                << summary.exhaust_vol[pyro::idx(pyro::Gas::CO2)]
                << " vol%)\n";
    } else if (audit->parsed()) {
      std::cout << pyro::audit_text(audit_result);
      double worst = 0.0;
      for (double r : audit_result.relative_imbalance)
        worst = std::max(worst, std::abs(r));
      std::cout << "max relative element imbalance: " << worst << "\n";
    } else {
      const double interval =
          report_interval > 0.0 ? report_interval : cfg.report.interval_s;
      pyro::CsvWriter csv(*fs, args.out_dir);
      solver.integrate(
          0.0, t_end_hours * 3600.0, &x, &z, cfg.make_schedule(fs), interval,
          [&](double t, const Eigen::VectorXd& xi, const Eigen::VectorXd& zi) {
            csv.write(t, xi, zi);
          });
      pyro::save_state(args.out_dir + "/state_end.json", x, z);
      const pyro::SteadySummary end_summary =
          pyro::summarize(*fs, x, z, cfg.report.lhv_MJ_kg);
      pyro::write_report(args.out_dir + "/report_end.txt", end_summary,
                         fs->element_balance_audit(x, z));
      std::cout << "simulated " << t_end_hours << " h; end free lime "
                << end_summary.clinker_wt[pyro::idx(pyro::Solid::CaO)]
                << " wt% (time series in " << args.out_dir << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "pyrosim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
