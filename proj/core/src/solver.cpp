#include "pyro/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"

namespace pyro {

namespace {
constexpr double kConcFloor = 1.0;    // mol/m3
constexpr double kEnergyFloor = 1e6;  // J/m3
constexpr double kSteadyTau = 100.0;  // s, steadiness reference horizon

// Largest step fraction keeping temperatures, pressures and fill angles
// inside their physical boxes (the property models are only defined there).
double bounded_lambda(const Layout& layout, const Eigen::VectorXd& z,
                      const Eigen::VectorXd& dz) {
  double lam = 1.0;
  for (int i = 0; i < z.size(); ++i) {
    double lo, hi;
    switch (layout.z_kind(i)) {
      case Layout::ZKind::Temperature:
        lo = kTemperatureMin + 10.0;
        hi = kTemperatureMax - 10.0;
        break;
      case Layout::ZKind::Pressure:
        lo = 1e3;
        hi = 1e7;
        break;
      default:
        lo = 0.0;
        hi = 2.0 * kPi - 1e-6;
    }
    if (dz(i) > 0.0 && z(i) + dz(i) > hi) lam = std::min(lam, (hi - z(i)) / dz(i));
    if (dz(i) < 0.0 && z(i) + dz(i) < lo) lam = std::min(lam, (lo - z(i)) / dz(i));
  }
  return std::max(lam, 1e-4);
}
}  // namespace

void SolverConfig::validate() const {
  if (!(dt_min <= dt_initial && dt_initial <= dt_max))
    throw Error("solver config: requires dt_min <= dt_initial <= dt_max");
  if (!(newton_tol > 0.0 && steady_tol > 0.0))
    throw Error("solver config: tolerances must be positive");
}

DaeSolver::DaeSolver(Flowsheet& fs, SolverConfig cfg) : fs_(fs), cfg_(cfg) {
  cfg_.validate();
  const Layout& layout = fs_.layout();
  const int nb = layout.n_blocks();
  block_rows_.assign(nb, {});
  std::vector<std::vector<int>> block_deps(nb);
  for (const auto& [r, c] : fs_.block_pattern()) block_deps[c].push_back(r);

  // Row index set per column block: rows of every row-block that structurally
  // depends on this block, f rows first, then g rows offset by n_x.
  std::vector<std::pair<int, int>> block_useg(nb);
  for (int u = 0, b = 0; u < layout.n_units(); ++u)
    for (int k = 0; k < layout.unit(u).n_segments; ++k, ++b)
      block_useg[b] = {u, k};
  for (int cb = 0; cb < nb; ++cb) {
    for (int rb : block_deps[cb]) {
      const auto [u, k] = block_useg[rb];
      const UnitKind kind = layout.unit(u).kind;
      const int x0 = layout.x_offset(u, k);
      for (int i = 0; i < layout.x_stride(kind); ++i)
        block_rows_[cb].push_back(x0 + i);
      const int z0 = layout.z_offset(u, k);
      for (int i = 0; i < layout.z_stride(kind); ++i)
        block_rows_[cb].push_back(fs_.n_x() + z0 + i);
    }
    std::sort(block_rows_[cb].begin(), block_rows_[cb].end());
  }

  col_block_.assign(fs_.n_x() + fs_.n_z(), -1);
  for (int u = 0, b = 0; u < layout.n_units(); ++u)
    for (int k = 0; k < layout.unit(u).n_segments; ++k, ++b) {
      const UnitKind kind = layout.unit(u).kind;
      for (int i = 0; i < layout.x_stride(kind); ++i)
        col_block_[layout.x_offset(u, k) + i] = b;
      for (int i = 0; i < layout.z_stride(kind); ++i)
        col_block_[fs_.n_x() + layout.z_offset(u, k) + i] = b;
    }
}

double DaeSolver::x_floor(int i) const {
  return fs_.layout().x_is_concentration(i) ? kConcFloor : kEnergyFloor;
}

void DaeSolver::build_jacobian(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& z) {
  const int nx = fs_.n_x(), nz = fs_.n_z();
  const int n = nx + nz;
  jac_.setZero(n, n);

  Eigen::VectorXd f0, g0, fp, gp;
  fs_.eval(x, z, &f0, &g0);
  Eigen::VectorXd xp = x, zp = z;

  auto w_value = [&](int c) { return c < nx ? x(c) : z(c - nx); };
  auto w_typical = [&](int c) {
    if (c < nx) return x_floor(c);
    // Temperatures ~ hundreds K, pressures ~ 1e5 Pa, angles ~ 1 rad; a
    // common floor of the z value magnitude works for all three.
    return std::max(std::abs(z(c - nx)), 1.0);
  };

  for (const auto& color : fs_.coloring_groups()) {
    std::vector<double> h(color.size());
    for (std::size_t ci = 0; ci < color.size(); ++ci) {
      const int c = color[ci];
      h[ci] = 1e-7 * std::max(std::abs(w_value(c)), w_typical(c));
      if (c < nx)
        xp(c) += h[ci];
      else
        zp(c - nx) += h[ci];
    }
    fs_.eval(xp, zp, &fp, &gp);
    for (std::size_t ci = 0; ci < color.size(); ++ci) {
      const int c = color[ci];
      for (int r : block_rows_[col_block_[c]]) {
        const double d = r < nx ? (fp(r) - f0(r)) : (gp(r - nx) - g0(r - nx));
        jac_(r, c) = d / h[ci];
      }
      if (c < nx)
        xp(c) = x(c);
      else
        zp(c - nx) = z(c - nx);
    }
  }
  jac_valid_ = true;
  ++stats_.jacobian_builds;
}

double DaeSolver::newton_error(const Eigen::VectorXd& Fx,
                               const Eigen::VectorXd& Fg,
                               const Eigen::VectorXd& x_ref, double dt) const {
  (void)dt;
  double err = 0.0;
  for (int i = 0; i < Fx.size(); ++i)
    err = std::max(err,
                   std::abs(Fx(i)) / (std::abs(x_ref(i)) + x_floor(i)));
  for (int i = 0; i < Fg.size(); ++i) err = std::max(err, std::abs(Fg(i)));
  return err;
}

namespace {
// Index of the worst scaled row, for diagnostics.
int argmax_error(const Eigen::VectorXd& Fx, const Eigen::VectorXd& Fg,
                 const Eigen::VectorXd& x_ref,
                 const std::function<double(int)>& floor_of) {
  int worst = 0;
  double best = -1.0;
  for (int i = 0; i < Fx.size(); ++i) {
    const double e = std::abs(Fx(i)) / (std::abs(x_ref(i)) + floor_of(i));
    if (e > best) {
      best = e;
      worst = i;
    }
  }
  for (int i = 0; i < Fg.size(); ++i)
    if (std::abs(Fg(i)) > best) {
      best = std::abs(Fg(i));
      worst = static_cast<int>(Fx.size()) + i;
    }
  return worst;
}
}  // namespace

bool DaeSolver::newton_transient(double dt, Eigen::VectorXd* x,
                                 Eigen::VectorXd* z) {
  const int nx = fs_.n_x(), nz = fs_.n_z();
  const Eigen::VectorXd x0 = *x;
  Eigen::VectorXd xk = *x, zk = *z;
  Eigen::VectorXd f, g;

  auto residual = [&](const Eigen::VectorXd& xi, const Eigen::VectorXd& zi,
                      Eigen::VectorXd* Fx, Eigen::VectorXd* Fg) {
    fs_.eval(xi, zi, &f, &g);
    *Fx = xi - x0 - dt * f;
    *Fg = g;
  };

  Eigen::VectorXd Fx, Fg;
  residual(xk, zk, &Fx, &Fg);
  double err = newton_error(Fx, Fg, x0, dt);

  for (int it = 0; it < cfg_.max_newton_iters; ++it) {
    if (err < cfg_.newton_tol) {
      // Nonnegativity safeguard: clip stray negative concentrations and
      // re-verify the converged residual still holds (loosely).
      bool clipped = false;
      for (int i = 0; i < nx; ++i)
        if (fs_.layout().x_is_concentration(i) && xk(i) < 0.0) {
          if (xk(i) < -1e-6 * x_floor(i)) clipped = true;
          xk(i) = 0.0;
        }
      if (clipped) {
        residual(xk, zk, &Fx, &Fg);
        if (newton_error(Fx, Fg, x0, dt) > 100.0 * cfg_.newton_tol)
          return false;
      }
      *x = xk;
      *z = zk;
      return true;
    }
    if (!jac_valid_) build_jacobian(xk, zk);

    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(nx + nz, nx + nz);
    J.topRows(nx) = -dt * jac_.topRows(nx);
    J.topLeftCorner(nx, nx) += Eigen::MatrixXd::Identity(nx, nx);
    J.bottomRows(nz) = jac_.bottomRows(nz);

    Eigen::VectorXd F(nx + nz);
    F << Fx, Fg;
    // Row equilibration keeps the LU well scaled across the mixed units.
    Eigen::VectorXd rs = J.cwiseAbs().rowwise().maxCoeff().cwiseMax(1e-300);
    const Eigen::VectorXd dw =
        (rs.asDiagonal().inverse() * J)
            .partialPivLu()
            .solve(rs.asDiagonal().inverse() * (-F));
    if (!dw.allFinite()) return false;
    if (cfg_.verbosity >= 2) {
      int wi = 0;
      dw.cwiseAbs().maxCoeff(&wi);
      std::cerr << "  dw max " << dw(wi) << " at "
                << (wi < nx ? fs_.layout().x_name(wi)
                            : fs_.layout().z_name(wi - nx))
                << " |F| " << F.cwiseAbs().maxCoeff() << "\n";
    }

    double lambda = bounded_lambda(fs_.layout(), zk, dw.tail(nz));
    bool improved = false;
    double err_t = err;
    for (int ls = 0; ls < 5; ++ls) {
      Eigen::VectorXd xt = xk + lambda * dw.head(nx);
      Eigen::VectorXd zt = zk + lambda * dw.tail(nz);
      try {
        residual(xt, zt, &Fx, &Fg);
      } catch (const Error& e) {
        if (cfg_.verbosity >= 2)
          std::cerr << "  newton eval failed: " << e.what() << "\n";
        lambda *= 0.5;
        continue;
      }
      err_t = newton_error(Fx, Fg, x0, dt);
      if (err_t < err || err_t < cfg_.newton_tol) {
        xk = xt;
        zk = zt;
        err = err_t;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (cfg_.verbosity >= 2) {
      const int worst = argmax_error(Fx, Fg, x0, [&](int i) { return x_floor(i); });
      const std::string name =
          worst < nx ? fs_.layout().x_name(worst)
                     : fs_.layout().z_name(worst - nx);
      std::cerr << "  newton it " << it << " err " << err_t
                << (improved ? "" : " (no improvement)") << " lambda "
                << lambda << " worst " << name << "\n";
    }
    ++stats_.newton_iterations;
    if (!improved) {
      if (jac_valid_ && it == 0) {
        // Retry the iteration with a fresh Jacobian before giving up.
        build_jacobian(xk, zk);
        continue;
      }
      return false;
    }
  }
  return err < cfg_.newton_tol;
}

bool DaeSolver::step(double dt, Eigen::VectorXd* x, Eigen::VectorXd* z) {
  // Reuse the Jacobian while the step size stays close to the one it was
  // built for; the transient system matrix depends on dt.
  if (jac_valid_ && jac_dt_ > 0.0 &&
      (dt > 1.8 * jac_dt_ || dt < jac_dt_ / 1.8))
    jac_valid_ = false;
  Eigen::VectorXd x_try = *x, z_try = *z;
  if (!newton_transient(dt, &x_try, &z_try)) {
    build_jacobian(*x, *z);
    jac_dt_ = dt;
    x_try = *x;
    z_try = *z;
    if (!newton_transient(dt, &x_try, &z_try)) return false;
  }
  jac_dt_ = dt;
  *x = x_try;
  *z = z_try;
  ++stats_.steps;
  return true;
}

void DaeSolver::integrate(
    double t0, double t1, Eigen::VectorXd* x, Eigen::VectorXd* z,
    std::vector<ScheduledEvent> schedule, double report_interval,
    const std::function<void(double, const Eigen::VectorXd&,
                             const Eigen::VectorXd&)>& report) {
  std::sort(schedule.begin(), schedule.end(),
            [](const ScheduledEvent& a, const ScheduledEvent& b) {
              return a.t < b.t;
            });
  std::size_t next_event = 0;
  while (next_event < schedule.size() && schedule[next_event].t <= t0)
    ++next_event;

  double t = t0;
  double dt = cfg_.dt_initial;
  double next_report = report_interval > 0.0 ? t0 + report_interval : t1 + 1.0;
  if (report) report(t0, *x, *z);

  while (t < t1 - 1e-9) {
    double dt_step = std::min(dt, t1 - t);
    if (next_event < schedule.size())
      dt_step = std::min(dt_step, schedule[next_event].t - t);
    if (report_interval > 0.0) dt_step = std::min(dt_step, next_report - t);
    dt_step = std::max(dt_step, 1e-9);

    Eigen::VectorXd x_try = *x, z_try = *z;
    if (step(dt_step, &x_try, &z_try)) {
      *x = x_try;
      *z = z_try;
      t += dt_step;
      dt = std::min(dt * 1.3, cfg_.dt_max);
      if (report_interval > 0.0 && t >= next_report - 1e-9) {
        if (report) report(t, *x, *z);
        next_report += report_interval;
      }
      if (next_event < schedule.size() &&
          t >= schedule[next_event].t - 1e-9) {
        schedule[next_event].apply(fs_.boundary);
        jac_valid_ = false;
        ++next_event;
      }
    } else {
      ++stats_.step_rejections;
      dt *= 0.5;
      if (dt < cfg_.dt_min)
        throw Error("integrate: step size underflow at t = " +
                    std::to_string(t) + " s");
    }
  }
  if (report && report_interval > 0.0) report(t1, *x, *z);
}

double DaeSolver::steady_norm(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& z) const {
  Eigen::VectorXd f, g;
  fs_.eval(x, z, &f, &g);
  double err = 0.0;
  for (int i = 0; i < f.size(); ++i)
    err = std::max(err, std::abs(f(i)) * kSteadyTau /
                            (std::abs(x(i)) + x_floor(i)));
  for (int i = 0; i < g.size(); ++i) err = std::max(err, std::abs(g(i)));
  return err;
}

bool DaeSolver::newton_steady(Eigen::VectorXd* x, Eigen::VectorXd* z) {
  const int nx = fs_.n_x(), nz = fs_.n_z();
  Eigen::VectorXd xk = *x, zk = *z;
  Eigen::VectorXd f, g;

  auto scaled_residual = [&](const Eigen::VectorXd& xi,
                             const Eigen::VectorXd& zi, Eigen::VectorXd* F) {
    fs_.eval(xi, zi, &f, &g);
    F->resize(nx + nz);
    for (int i = 0; i < nx; ++i)
      (*F)(i) = f(i) * kSteadyTau / (std::abs(xi(i)) + x_floor(i));
    F->tail(nz) = g;
  };

  Eigen::VectorXd F;
  scaled_residual(xk, zk, &F);
  double err = F.cwiseAbs().maxCoeff();

  for (int it = 0; it < 40; ++it) {
    if (err < cfg_.steady_tol) {
      *x = xk;
      *z = zk;
      return true;
    }
    build_jacobian(xk, zk);
    Eigen::MatrixXd J(nx + nz, nx + nz);
    for (int i = 0; i < nx; ++i)
      J.row(i) = jac_.row(i) * (kSteadyTau / (std::abs(xk(i)) + x_floor(i)));
    J.bottomRows(nz) = jac_.bottomRows(nz);
    Eigen::VectorXd rs = J.cwiseAbs().rowwise().maxCoeff().cwiseMax(1e-300);
    const Eigen::VectorXd dw =
        (rs.asDiagonal().inverse() * J)
            .partialPivLu()
            .solve(rs.asDiagonal().inverse() * (-F));
    if (!dw.allFinite()) return false;

    double lambda = bounded_lambda(fs_.layout(), zk, dw.tail(nz));
    bool improved = false;
    for (int ls = 0; ls < 8; ++ls) {
      Eigen::VectorXd xt = xk + lambda * dw.head(nx);
      Eigen::VectorXd zt = zk + lambda * dw.tail(nz);
      for (int i = 0; i < nx; ++i)
        if (fs_.layout().x_is_concentration(i) && xt(i) < 0.0) xt(i) = 0.0;
      try {
        scaled_residual(xt, zt, &F);
      } catch (const Error&) {
        lambda *= 0.5;
        continue;
      }
      const double err_t = F.cwiseAbs().maxCoeff();
      if (err_t < err) {
        xk = xt;
        zk = zt;
        err = err_t;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  *x = xk;
  *z = zk;
  return err < cfg_.steady_tol;
}

void DaeSolver::solve_steady(Eigen::VectorXd* x, Eigen::VectorXd* z) {
  // Quick exit: a converged state only needs the terminal polish.
  if (steady_norm(*x, *z) < cfg_.steady_tol) return;

  double dt = cfg_.ptc_dt0;
  int at_max = 0;
  while (at_max < 3) {
    Eigen::VectorXd x_try = *x, z_try = *z;
    if (step(dt, &x_try, &z_try)) {
      *x = x_try;
      *z = z_try;
      if (dt >= cfg_.ptc_dt_max) ++at_max;
      dt = std::min(dt * cfg_.ptc_growth, cfg_.ptc_dt_max);
      if (steady_norm(*x, *z) < 0.1 * cfg_.steady_tol) break;
    } else {
      ++stats_.step_rejections;
      dt *= 0.25;
      if (dt < 1e-4)
        throw Error("solve_steady: pseudo-transient continuation stalled");
    }
  }
  if (!newton_steady(x, z))
    throw Error("solve_steady: terminal Newton polish did not reach "
                "steady_tol (residual " +
                std::to_string(steady_norm(*x, *z)) + ")");
}

double algebraic_condition(const Flowsheet& fs, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& z) {
  const int nz = fs.n_z();
  Eigen::VectorXd f, g0, gp;
  fs.eval(x, z, &f, &g0);
  Eigen::MatrixXd G(nz, nz);
  Eigen::VectorXd zp = z;
  for (int j = 0; j < nz; ++j) {
    const double h = 1e-7 * std::max(std::abs(z(j)), 1.0);
    zp(j) += h;
    fs.eval(x, zp, &f, &gp);
    G.col(j) = (gp - g0) / h;
    zp(j) = z(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double newton_scalar(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double guess,
                     double lo, double hi, double tol) {
  double x = std::clamp(guess, lo, hi);
  const double f_lo = f(lo), f_hi = f(hi);
  if (f_lo * f_hi > 0.0) throw Error("newton_scalar: no bracket");
  const bool increasing = f_hi > f_lo;
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (std::abs(fx) < tol) return x;
    if ((fx > 0.0) == increasing)
      b = x;
    else
      a = x;
    const double d = df(x);
    double next = d != 0.0 ? x - fx / d : 0.5 * (a + b);
    if (!(next > a) || !(next < b)) next = 0.5 * (a + b);
    x = next;
  }
  return x;
}

}  // namespace pyro
