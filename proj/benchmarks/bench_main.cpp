#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "cvs/diagnostics.hpp"
#include "cvs/hyperbolic.hpp"
#include "cvs/interface.hpp"
#include "cvs/picard.hpp"
#include "cvs/scenario.hpp"

using namespace cvs;

namespace {

Prepared sheet(int n) {
  RunConfig c = preset("perturbed-sheet");
  c.grid.n_tan = n;
  c.grid.n_nrm = n;
  c.output.write = false;
  return prepare(c);
}

void BM_RhsNonlinear(benchmark::State& st) {
  Prepared p = sheet(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(rhs_nonlinear(p.ctx, p.state));
  st.SetItemsProcessed(st.iterations() * 2 * p.disc->grid.size());
}
BENCHMARK(BM_RhsNonlinear)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& st) {
  Prepared p = sheet(static_cast<int>(st.range(0)));
  const double dt = stable_dt(p.ctx, p.state);
  SimState s = p.state;
  for (auto _ : st) {
    step(p.ctx, s, dt);
    if (s.t > 0.2) s = p.state;
  }
}
BENCHMARK(BM_Rk4Step)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Energy(benchmark::State& st) {
  Prepared p = sheet(64);
  for (auto _ : st)
    benchmark::DoNotOptimize(energy0(p.state.bulk, p.state.iface, p.ctx.phys, p.ctx.eos, p.disc, 0.0));
}
BENCHMARK(BM_Energy)->Unit(benchmark::kMicrosecond);

void BM_LinearSolve(benchmark::State& st) {
  RunConfig c = preset("perturbed-sheet");
  c.grid.n_tan = 32;
  c.grid.n_nrm = 32;
  c.phys.kappa = 1e-2;
  Prepared p = prepare(c);
  PicardOptions po;
  po.T = 0.02;
  PicardState ps = picard_start(p.ctx, p.state, po);
  for (auto _ : st) benchmark::DoNotOptimize(linear_solve(p.ctx, ps.current, ps.current, p.state));
}
BENCHMARK(BM_LinearSolve)->Unit(benchmark::kMillisecond);

void BM_RecoverInterface(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  auto sp = Spectral::get(n, 1);
  PhysicsConfig ph;
  ph.kappa = 1e-2;
  InterfaceField f{Field(n), Field(n, 0.0)};
  for (int i = 0; i < n; ++i) f.psi[i] = 0.1 * std::sin(4 * M_PI * i / n);
  Field jq = kappa_jump_target(*sp, f, ph);
  for (auto _ : st) benchmark::DoNotOptimize(recover_interface(*sp, jq, f.psi_t, ph, Field(n, 0.0)));
}
BENCHMARK(BM_RecoverInterface)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_AssembleStructure(benchmark::State& st) {
  std::mt19937_64 rng(1);
  const int d = static_cast<int>(st.range(0));
  for (auto _ : st) {
    auto m = assemble(random_boundary_state(rng, d));
    benchmark::DoNotOptimize(boundary_structure(m));
  }
}
BENCHMARK(BM_AssembleStructure)->Arg(2)->Arg(3);

void BM_IdentityBattery(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(identity_battery(BatteryOptions{}));
}
BENCHMARK(BM_IdentityBattery)->Unit(benchmark::kMillisecond);

void BM_NormalOp(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  NormalOp op(StencilKind::Sbp, 4, n, 28.0 / (n - 1));
  std::vector<double> f(static_cast<std::size_t>(n) * 64, 1.0), out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(0.01 * i);
  for (auto _ : st) {
    op.apply(f.data(), out.data(), 64);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetBytesProcessed(st.iterations() * f.size() * sizeof(double));
}
BENCHMARK(BM_NormalOp)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
