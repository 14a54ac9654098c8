#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "worn/kernels.hpp"
#include "worn/mesh.hpp"

using namespace worn;

namespace {

std::vector<Vec2> regular_polygon(int n) {
  std::vector<Vec2> v;
  for (int i = 0; i < n; ++i) v.push_back(unit_normal(2.0 * std::numbers::pi * i / n));
  return v;
}

const TriangleMesh& disk_mesh() {
  static const TriangleMesh mesh = mesh_body(SupportFunction::constant(AngleGrid(256), 1.0), 0.01);
  return mesh;
}

template <bool Parallel>
void BM_PolygonSupport(benchmark::State& state) {
  const auto v = regular_polygon(static_cast<int>(state.range(0)));
  const AngleGrid grid(4096);
  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::polygon_support(v, grid, out);
    } else {
      kernels::polygon_support_serial(v, grid, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_ElementMatrices(benchmark::State& state) {
  const TriangleMesh& m = disk_mesh();
  for (auto _ : state) {
    auto e = Parallel ? kernels::p1_element_matrices(m.nodes, m.triangles) : kernels::p1_element_matrices_serial(m.nodes, m.triangles);
    benchmark::DoNotOptimize(e.area.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.triangles.size()));
}

template <bool Parallel>
void BM_DictionaryMoments(benchmark::State& state) {
  const AngleGrid grid(static_cast<int>(state.range(0)));
  std::vector<double> density(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) density[static_cast<std::size_t>(i)] = 1.0 + 0.3 * std::cos(2 * grid.theta(i));
  for (auto _ : state) {
    auto m = Parallel ? kernels::dictionary_moments(density, grid, 8) : kernels::dictionary_moments_serial(density, grid, 8);
    benchmark::DoNotOptimize(m.data());
  }
}

}  // namespace

BENCHMARK(BM_PolygonSupport<false>)->Arg(6)->Arg(256);
BENCHMARK(BM_PolygonSupport<true>)->Arg(6)->Arg(256);
BENCHMARK(BM_ElementMatrices<false>);
BENCHMARK(BM_ElementMatrices<true>);
BENCHMARK(BM_DictionaryMoments<false>)->Arg(256)->Arg(8192);
BENCHMARK(BM_DictionaryMoments<true>)->Arg(256)->Arg(8192);

BENCHMARK_MAIN();
