// Microbenchmarks for the hot paths: property evaluation, global residual
// assembly and the colored finite-difference Jacobian.

#include <benchmark/benchmark.h>

#include "pyro/scenario.hpp"
#include "pyro/solver.hpp"

namespace {

struct Fixture {
  std::shared_ptr<pyro::Flowsheet> fs;
  Eigen::VectorXd x, z;

  Fixture() {
    const pyro::ScenarioConfig cfg = pyro::ScenarioConfig::defaults();
    fs = cfg.build();
    pyro::apply_initial_profile(*fs, "ignition", &x);
    z = fs->consistent_z(x);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

static void BM_EnthalpyGas(benchmark::State& state) {
  const pyro::CompoundTable table = pyro::CompoundTable::builtin();
  pyro::GasVec n{};
  n[pyro::idx(pyro::Gas::CO2)] = 4.0;
  n[pyro::idx(pyro::Gas::N2)] = 12.0;
  n[pyro::idx(pyro::Gas::H2O)] = 0.5;
  double T = 400.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pyro::enthalpy_gas(table, T, n));
    T = T < 2000.0 ? T + 1.0 : 400.0;
  }
}
BENCHMARK(BM_EnthalpyGas);

static void BM_MixtureViscosity(benchmark::State& state) {
  const pyro::CompoundTable table = pyro::CompoundTable::builtin();
  pyro::GasVec n{};
  n[pyro::idx(pyro::Gas::CO2)] = 4.0;
  n[pyro::idx(pyro::Gas::N2)] = 12.0;
  n[pyro::idx(pyro::Gas::O2)] = 1.0;
  n[pyro::idx(pyro::Gas::H2O)] = 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(pyro::gas_viscosity(table, 1100.0, n));
}
BENCHMARK(BM_MixtureViscosity);

static void BM_GlobalResidual(benchmark::State& state) {
  Fixture& f = fixture();
  Eigen::VectorXd rf, rg;
  for (auto _ : state) {
    f.fs->eval(f.x, f.z, &rf, &rg);
    benchmark::DoNotOptimize(rf.data());
  }
}
BENCHMARK(BM_GlobalResidual);

static void BM_ColoredJacobian(benchmark::State& state) {
  Fixture& f = fixture();
  pyro::DaeSolver solver(*f.fs, pyro::SolverConfig{});
  for (auto _ : state) {
    solver.invalidate_jacobian();
    Eigen::VectorXd x = f.x, z = f.z;
    // One rejected tiny step forces exactly one Jacobian build.
    benchmark::DoNotOptimize(solver.step(1e-9, &x, &z));
  }
}
BENCHMARK(BM_ColoredJacobian);

BENCHMARK_MAIN();
