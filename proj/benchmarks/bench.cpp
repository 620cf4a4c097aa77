#include <benchmark/benchmark.h>

#include "ulab/counting.hpp"
#include "ulab/norms.hpp"
#include "ulab/pet.hpp"

using namespace ulab;

namespace {

// Box norm along s copies of <e_1> in F_p^2, inductive against direct.
template <bool Direct>
void BM_BoxNorm(benchmark::State& state) {
  const FieldConfig cfg(static_cast<int>(state.range(0)), 2);
  const auto f = random_one_bounded(cfg, 1, UnitPhase{});
  const auto dirs = repeated(cyclic(cfg, FpPoint{{1, 0}}), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(Direct ? box_norm_direct(f, dirs) : box_norm(f, dirs));
}
BENCHMARK(BM_BoxNorm<false>)->Name("box_norm/inductive")->Args({5, 2})->Args({7, 3})->Args({11, 3});
BENCHMARK(BM_BoxNorm<true>)->Name("box_norm/direct")->Args({5, 2})->Args({7, 3})->Args({11, 3});

void BM_CountingOperator(benchmark::State& state) {
  const FieldConfig cfg(static_cast<int>(state.range(0)), 2);
  const ProgressionConfig pc(cfg, {{1, 0}, {0, 1}}, {{0, 0, 1}, {0, 1, 1}});
  std::vector<GroupFunction> fs;
  for (std::uint64_t j = 0; j < 3; ++j) fs.push_back(random_one_bounded(cfg, j, UnitPhase{}));
  for (auto _ : state) benchmark::DoNotOptimize(counting_operator(pc, fs));
}
BENCHMARK(BM_CountingOperator)->Arg(5)->Arg(11)->Arg(23)->Arg(41);

void BM_PetRun(benchmark::State& state) {
  const ProgressionConfig pc(FieldConfig(5, 2), {{1, 0}, {0, 1}}, {{0, 0, 1}, {0, 1, 1}});
  const auto family = initial_family(pc, true);
  for (auto _ : state) benchmark::DoNotOptimize(pet_run(family));
}
BENCHMARK(BM_PetRun);

void BM_PetRunQuadratic(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  std::vector<IntVec> vs;
  std::vector<IntPoly> ps;
  for (int j = 1; j <= l; ++j) {
    vs.push_back({j % 2, 1});
    ps.push_back({0, j, 1});
  }
  const ProgressionConfig pc(FieldConfig(5, 2), vs, ps);
  const auto family = initial_family(pc, true);
  for (auto _ : state) benchmark::DoNotOptimize(pet_run(family));
}
BENCHMARK(BM_PetRunQuadratic)->DenseRange(2, 3);

}  // namespace
BENCHMARK_MAIN();
