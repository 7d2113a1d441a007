// Serial reference vs OpenMP path for the three parallel kernels.
// Arg 0 = Serial, 1 = Parallel.

#include <benchmark/benchmark.h>

#include "lbblab/fem.hpp"
#include "lbblab/infsup.hpp"
#include "lbblab/perturb.hpp"
#include "lbblab/spectral.hpp"

using namespace lbblab;

namespace {

fem::Exec exec_of(const benchmark::State& s) { return s.range(0) ? fem::Exec::Parallel : fem::Exec::Serial; }

std::shared_ptr<const geometry::Mesh> sv_mesh(int nx, int ny) {
  geometry::SvSplitParams p;
  p.b = 0.4;
  return std::make_shared<const geometry::Mesh>(geometry::sv_split(geometry::rect_grid(4, 1, nx, ny), p));
}

infsup::Discretization disc(int nx, int ny) {
  const auto m = sv_mesh(nx, ny);
  auto cfg = infsup::PairConfig::same_mesh(m, infsup::velocity_space(*m, 4),
                                           infsup::pressure_space(*m, 3, fem::Continuity::Discontinuous));
  return infsup::discretize(cfg);
}

void BM_assemble_system(benchmark::State& state) {
  const auto d = disc(12, 3);
  for (auto _ : state) {
    auto s = fem::assemble_system(*d.dof_v, *d.dof_p, nullptr, exec_of(state));
    benchmark::DoNotOptimize(s.B.nonZeros());
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_assemble_system)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_dense_schur(benchmark::State& state) {
  const auto d = disc(8, 2);
  const spectral::SchurOperator op(d.system.A, d.system.B);
  for (auto _ : state) {
    auto s = spectral::dense_schur(op, 4000, exec_of(state));
    benchmark::DoNotOptimize(s.data());
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_dense_schur)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_polygon_disk_eps(benchmark::State& state) {
  for (auto _ : state) {
    auto e = perturb::polygon_disk_eps(32, 512, exec_of(state));
    benchmark::DoNotOptimize(e.eps);
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_polygon_disk_eps)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
