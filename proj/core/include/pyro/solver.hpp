#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "pyro/flowsheet.hpp"

namespace pyro {

struct SolverConfig {
  double dt_initial = 10.0;  // s
  double dt_min = 1e-3;
  double dt_max = 60.0;
  double newton_tol = 1e-8;
  int max_newton_iters = 12;
  double steady_tol = 1e-7;
  // Pseudo-transient continuation for the steady solve.
  int verbosity = 0;  // 1: step-level, 2: newton-iteration diagnostics
  double ptc_dt0 = 1.0;
  double ptc_dt_max = 1e6;
  double ptc_growth = 1.6;

  void validate() const;
};

struct ScheduledEvent {
  double t = 0.0;  // s
  std::string name;
  std::function<void(BoundarySpec&)> apply;
};

struct SolveStats {
  int steps = 0;
  int newton_iterations = 0;
  int jacobian_builds = 0;
  int step_rejections = 0;
};

// Implicit-Euler DAE integrator over a flowsheet, with a colored
// finite-difference Jacobian shared across Newton iterations and steps.
class DaeSolver {
 public:
  DaeSolver(Flowsheet& fs, SolverConfig cfg);

  const SolverConfig& config() const { return cfg_; }
  const SolveStats& stats() const { return stats_; }

  // One implicit Euler step of size dt. Returns false when Newton failed
  // even after a Jacobian refresh (caller should reduce dt).
  bool step(double dt, Eigen::VectorXd* x, Eigen::VectorXd* z);

  // Adaptive integration with scheduled boundary events (applied at exact
  // times) and a fixed-interval reporting callback.
  void integrate(double t0, double t1, Eigen::VectorXd* x, Eigen::VectorXd* z,
                 std::vector<ScheduledEvent> schedule, double report_interval,
                 const std::function<void(double, const Eigen::VectorXd&,
                                          const Eigen::VectorXd&)>& report);

  // Steady state by pseudo-transient continuation plus a terminal Newton
  // polish; starts from the supplied (x, z).
  void solve_steady(Eigen::VectorXd* x, Eigen::VectorXd* z);

  // Scaled steadiness measure max_i |f_i| tau / (|x_i| + floor_i) joined
  // with max |g|.
  double steady_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const;

  void invalidate_jacobian() { jac_valid_ = false; }

 private:
  void build_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& z);
  double newton_error(const Eigen::VectorXd& Fx, const Eigen::VectorXd& Fg,
                      const Eigen::VectorXd& x_ref, double dt) const;
  bool newton_transient(double dt, Eigen::VectorXd* x, Eigen::VectorXd* z);
  bool newton_steady(Eigen::VectorXd* x, Eigen::VectorXd* z);
  double x_floor(int i) const;

  Flowsheet& fs_;
  SolverConfig cfg_;
  SolveStats stats_;
  Eigen::MatrixXd jac_;  // d[f; g]/d[x; z]
  bool jac_valid_ = false;
  double jac_dt_ = 0.0;
  std::vector<std::vector<int>> block_rows_;  // rows touched per block
  std::vector<int> col_block_;                // combined column -> block
};

// Finite condition estimate of dg/dz (the index-1 witness).
double algebraic_condition(const Flowsheet& fs, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& z);

// Scalar damped-Newton helper used by a few closures and tests.
double newton_scalar(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double guess,
                     double lo, double hi, double tol);

}  // namespace pyro
