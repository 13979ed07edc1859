#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bolza/characteristics.hpp"
#include "bolza/grid_function.hpp"
#include "bolza/model.hpp"
#include "bolza/oracle.hpp"
#include "bolza/qualification.hpp"
#include "bolza/solver.hpp"

namespace {

using namespace bolza;

// Box-constrained instance with n states, n controls and T stages.
BolzaProblem boxInstance(int n, int T) {
    Matrix A = 0.1 * Matrix::Identity(n, n);
    A(0, n - 1) = 0.05;
    StageSpec s = makeStage(A, Matrix::Identity(n, n), Vector::Constant(n, 0.1), 0.5 * Matrix::Identity(n, n),
                            Matrix::Identity(n, n));
    s.controlSet = ConvexSet::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0));
    s.stateSet = ConvexSet::box(Vector::Constant(n, -4.0), Vector::Constant(n, 4.0));
    return {std::vector<StageSpec>(static_cast<std::size_t>(T), s), makeTerminal(Matrix::Identity(n, n))};
}

BolzaProblem freeInstance(int n, int T) {
    StageSpec s = makeStage(0.1 * Matrix::Identity(n, n), Matrix::Identity(n, n), Vector::Zero(n),
                            Matrix::Identity(n, n), Matrix::Identity(n, n));
    return {std::vector<StageSpec>(static_cast<std::size_t>(T), s), makeTerminal(Matrix::Identity(n, n))};
}

void BM_SolvePrimal(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int T = static_cast<int>(state.range(1));
    const PrimalModel model(boxInstance(n, T));
    const Vector xi = Vector::Constant(n, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(solvePrimal(model, 0, xi));
}
BENCHMARK(BM_SolvePrimal)->Args({1, 5})->Args({3, 5})->Args({3, 10})->Unit(benchmark::kMillisecond);

void BM_SolveDual(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int T = static_cast<int>(state.range(1));
    const PrimalModel model(boxInstance(n, T));
    const Vector eta = Vector::Constant(n, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(solveDual(model, 0, eta));
}
BENCHMARK(BM_SolveDual)->Args({1, 5})->Args({3, 5})->Unit(benchmark::kMillisecond);

void BM_BuildCharacteristic(benchmark::State& state) {
    const PrimalModel model(boxInstance(2, 5));
    const Vector xi = vec({1.0, -0.5});
    const Vector eta = -solvePrimal(model, 0, xi).costates.front();
    for (auto _ : state) benchmark::DoNotOptimize(buildCharacteristic(model, 0, xi, eta));
}
BENCHMARK(BM_BuildCharacteristic)->Unit(benchmark::kMillisecond);

void BM_GridValueDp(benchmark::State& state) {
    const BolzaProblem p = boxInstance(1, 3);
    const GridAxis axis{-5.0, 5.0, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(gridValueDp(p, axis));
}
BENCHMARK(BM_GridValueDp)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_LltConjugate(benchmark::State& state) {
    const GridAxis axis{-5.0, 5.0, static_cast<int>(state.range(0))};
    const GridFunction f = GridFunction::sample({axis}, [](const Vector& x) { return std::abs(x(0)) + 0.5 * x(0) * x(0); });
    for (auto _ : state) benchmark::DoNotOptimize(lltConjugate(f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LltConjugate)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oN);

void BM_RiccatiRecursion(benchmark::State& state) {
    const BolzaProblem p = freeInstance(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) benchmark::DoNotOptimize(riccatiRecursion(p));
}
BENCHMARK(BM_RiccatiRecursion)->Arg(1)->Arg(3)->Arg(10);

void BM_CheckH(benchmark::State& state) {
    const BolzaProblem p = boxInstance(3, 5);
    for (auto _ : state) benchmark::DoNotOptimize(checkH(p));
}
BENCHMARK(BM_CheckH)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
