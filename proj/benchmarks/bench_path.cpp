#include "gsqr/homotopy.hpp"
#include "gsqr/multiresponse.hpp"
#include "gsqr/select.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace gsqr;

namespace {

Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> N;
    Matrix M(rows, cols);
    for (auto& x : M.reshaped()) x = N(rng);
    return M;
}

// Groups of size 2 over m columns (the last may be a singleton).
GroupStructure pairs(int m) {
    std::vector<std::vector<int>> groups;
    for (int j = 0; j < m; j += 2) groups.push_back(j + 1 < m ? std::vector<int>{j, j + 1} : std::vector<int>{j});
    return GroupStructure(groups, m);
}

void BM_PathGaussian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    std::mt19937_64 rng(1);
    const Matrix X = gaussian(rng, n, m);
    const Vector y = gaussian(rng, n, 1).col(0);
    const auto problem = std::make_shared<const QuantileProblem>(X, y, 0.5, pairs(m));
    SolverOptions opts;
    opts.certify = state.range(2) != 0;
    std::size_t nodes = 0;
    for (auto _ : state) {
        const PathResult res = solve_path(problem, {}, opts);
        nodes = res.path.nodes.size();
        benchmark::DoNotOptimize(nodes);
    }
    state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_PathGaussian)
    ->Args({20, 6, 1})
    ->Args({50, 10, 1})
    ->Args({100, 20, 1})
    ->Args({100, 20, 0})
    ->Args({200, 12, 1})
    ->Unit(benchmark::kMillisecond);

void BM_PathStacked(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    const Matrix X = gaussian(rng, 82, 14);
    const Matrix Y = gaussian(rng, 82, p);
    const auto stacked = std::make_shared<const QuantileProblem>(stack_problem(Y, X, 0.5).problem);
    std::size_t nodes = 0;
    for (auto _ : state) {
        const PathResult res = solve_path(stacked);
        nodes = res.path.nodes.size();
        benchmark::DoNotOptimize(nodes);
    }
    state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_PathStacked)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BicTrace(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const Matrix X = gaussian(rng, 100, 20);
    const Vector y = gaussian(rng, 100, 1).col(0);
    const auto problem = std::make_shared<const QuantileProblem>(X, y, 0.3, pairs(20));
    const PathResult res = solve_path(problem);
    for (auto _ : state) benchmark::DoNotOptimize(bic_trace(res.path, *problem));
}
BENCHMARK(BM_BicTrace);

}  // namespace

BENCHMARK_MAIN();
