#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/indicator/scene.hpp"
#include "slabprobe/indicator/series.hpp"
#include "slabprobe/solver/stiffness.hpp"

using namespace slabprobe;

namespace {

indicator::SceneSpec disc_spec(double edge) {
  indicator::SceneSpec spec;
  spec.slab = {0.0, 1.0, 2.66};
  spec.cavity = geometry::Disc{{0.0, 0.5}, 0.2};
  spec.mesh.target_edge = edge;
  spec.mesh.face_edge = edge / 4;
  return spec;
}

double edge_of(const benchmark::State& state) { return 1.0 / static_cast<double>(state.range(0)); }

void BM_NestedMeshing(benchmark::State& state) {
  const auto spec = disc_spec(edge_of(state));
  const auto polygon = geometry::polygonize_cavity(*spec.cavity, 128);
  for (auto _ : state) {
    auto pair = geometry::build_nested_meshes(spec.slab, polygon.vertices, spec.mesh);
    benchmark::DoNotOptimize(pair.full->vertex_count());
  }
}
BENCHMARK(BM_NestedMeshing)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_AssembleAndFactorize(benchmark::State& state) {
  const auto spec = disc_spec(edge_of(state));
  const auto pair = geometry::build_nested_meshes(
      spec.slab, geometry::polygonize_cavity(*spec.cavity, 128).vertices, spec.mesh);
  for (auto _ : state) {
    auto sys = solver::assemble(pair.full, probe::GammaField{});
    benchmark::DoNotOptimize(sys.get());
  }
  state.counters["nodes"] = static_cast<double>(pair.full->vertex_count());
}
BENCHMARK(BM_AssembleAndFactorize)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

// Solves against a factorization built once, as every probe and h does.
void BM_SolveWithReusedFactor(benchmark::State& state) {
  const auto spec = disc_spec(edge_of(state));
  const auto pair = geometry::build_nested_meshes(
      spec.slab, geometry::polygonize_cavity(*spec.cavity, 128).vertices, spec.mesh);
  const auto sys = solver::assemble(pair.full, probe::GammaField{});
  std::vector<std::complex<double>> data(pair.full->vertex_count());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = {pair.full->vertices[i].x(), 1.0};
  for (auto _ : state) {
    auto u = solver::solve_dirichlet(*sys, data);
    benchmark::DoNotOptimize(u.re.data());
  }
}
BENCHMARK(BM_SolveWithReusedFactor)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_EnergyGap(benchmark::State& state) {
  const indicator::Scene scene(disc_spec(edge_of(state)));
  const indicator::IndicatorSettings settings;
  const indicator::Probe probe;
  for (auto _ : state) {
    auto r = indicator::gap_for(scene, probe, 0.4, 0.1, settings, probe::DataMode::Localized);
    benchmark::DoNotOptimize(r.E);
  }
}
BENCHMARK(BM_EnergyGap)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_IndicatorSeries(benchmark::State& state) {
  const indicator::Scene scene(disc_spec(0.05));
  const indicator::IndicatorSettings settings;
  const indicator::Probe probe;
  for (auto _ : state) {
    auto s = indicator::compute_series(scene, probe, 0.4, settings);
    benchmark::DoNotOptimize(s.entries.data());
  }
}
BENCHMARK(BM_IndicatorSeries)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
