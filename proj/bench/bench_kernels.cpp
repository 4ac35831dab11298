// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "normtest/kernels.hpp"
#include "normtest/nulldist.hpp"
#include "normtest/parallel.hpp"
#include "normtest/samplers.hpp"

namespace {

using normtest::Matrix;
using normtest::Vector;

Matrix points(Eigen::Index n, Eigen::Index d) {
    normtest::Rng rng = normtest::substream(7, normtest::StreamFamily::Generic, 0);
    return normtest::standard_normal_matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(d), rng);
}

void BM_PairSumSerial(benchmark::State& state) {
    const Matrix y = points(state.range(0), 3);
    const Vector w = y.rowwise().squaredNorm();
    for (auto _ : state) {
        benchmark::DoNotOptimize(normtest::kernels::gauss_pair_sum_serial(y, w, 0.25));
    }
}

void BM_PairSumParallel(benchmark::State& state) {
    const Matrix y = points(state.range(0), 3);
    const Vector w = y.rowwise().squaredNorm();
    for (auto _ : state) {
        benchmark::DoNotOptimize(normtest::kernels::gauss_pair_sum(y, w, 0.25));
    }
}

void BM_RowSumsSerial(benchmark::State& state) {
    const Matrix y = points(state.range(0), 3);
    const Vector w = Vector::Ones(y.rows());
    for (auto _ : state) {
        benchmark::DoNotOptimize(normtest::kernels::gauss_row_sums_serial(y, w, 0.25));
    }
}

void BM_RowSumsParallel(benchmark::State& state) {
    const Matrix y = points(state.range(0), 3);
    const Vector w = Vector::Ones(y.rows());
    for (auto _ : state) {
        benchmark::DoNotOptimize(normtest::kernels::gauss_row_sums(y, w, 0.25));
    }
}

void BM_NullReplicates(benchmark::State& state, bool parallel) {
    const auto stat = normtest::scaled_t_statistic(2, 1.0);
    for (auto _ : state) {
        if (parallel) {
            benchmark::DoNotOptimize(normtest::null_replicates(2, 50, 0, 2000, 1, stat));
        } else {
            benchmark::DoNotOptimize(normtest::null_replicates_serial(2, 50, 0, 2000, 1, stat));
        }
    }
}

}  // namespace

BENCHMARK(BM_PairSumSerial)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_PairSumParallel)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_RowSumsSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_RowSumsParallel)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(BM_NullReplicates, serial, false);
BENCHMARK_CAPTURE(BM_NullReplicates, parallel, true);

BENCHMARK_MAIN();
