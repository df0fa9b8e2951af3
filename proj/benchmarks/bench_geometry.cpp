#include <benchmark/benchmark.h>

#include "qcpto/geometry.hpp"
#include "qcpto/rng.hpp"

using namespace qcpto;

namespace {

std::vector<Triangle> random_triangles(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Triangle> out;
  for (int k = 0; k < count; ++k) {
    const Vec2 apex{rng.uniform(20, 180), rng.uniform(20, 180)};
    out.push_back({apex, apex + Vec2{rng.uniform(-20, 20), rng.uniform(-20, 20)},
                   apex + Vec2{rng.uniform(-20, 20), rng.uniform(-20, 20)}});
  }
  return out;
}

void BM_Rasterize(benchmark::State& state) {
  const GridSpec grid = GridSpec::covering(Region{}, 0.5);
  const auto tris = random_triangles(64, 3);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rasterize_triangle(tris[k++ % tris.size()], grid).count());
}
BENCHMARK(BM_Rasterize);

void BM_QualityMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec grid = GridSpec::covering(Region{}, 0.5);
  const auto tris = random_triangles(2 * n, 5);
  std::vector<Roi> rois(static_cast<std::size_t>(n));
  std::vector<Triangle> fovs;
  for (int i = 0; i < n; ++i) {
    rois[static_cast<std::size_t>(i)].triangle = tris[static_cast<std::size_t>(2 * i)];
    rois[static_cast<std::size_t>(i)].turn = Turn::Left;
    fovs.push_back(tris[static_cast<std::size_t>(2 * i + 1)]);
  }
  std::vector<int> users(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) users[static_cast<std::size_t>(i)] = i;
  for (auto _ : state) {
    const CoverageScene scene(grid, rois, fovs);
    benchmark::DoNotOptimize(scene.build_quality_matrix(users)(0, 1));
  }
}
BENCHMARK(BM_QualityMatrix)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
