// Serial reference kernels vs. their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "circle_rope/harness.hpp"
#include "circle_rope/metrics.hpp"

using namespace circle_rope;

namespace {

std::vector<IndexPoint> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<IndexPoint> out(n);
  for (auto& p : out) p = {u(rng), u(rng), u(rng)};
  return out;
}

std::vector<HeadVector> random_vectors(std::size_t n, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<HeadVector> out(n, HeadVector(static_cast<std::size_t>(dim)));
  for (auto& v : out) {
    for (auto& x : v) x = g(rng);
  }
  return out;
}

void BM_PtdSerial(benchmark::State& state) {
  const auto text = random_points(static_cast<std::size_t>(state.range(0)), 1);
  const auto image = random_points(4096, 2);
  for (auto _ : state) {
    const auto m = distance_matrix_serial(text, image, DistanceConvention::Euclidean);
    benchmark::DoNotOptimize(ptd_serial(m));
  }
}

void BM_PtdParallel(benchmark::State& state) {
  const auto text = random_points(static_cast<std::size_t>(state.range(0)), 1);
  const auto image = random_points(4096, 2);
  for (auto _ : state) {
    const auto m = distance_matrix(text, image, DistanceConvention::Euclidean);
    benchmark::DoNotOptimize(ptd(m));
  }
}

void BM_LogitsSerial(benchmark::State& state) {
  const RotaryParams params;
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto queries = random_vectors(n, params.head_dim, 3);
  const auto key = random_vectors(1, params.head_dim, 4).front();
  const auto qi = random_points(n, 5);
  const auto ki = random_points(1024, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(text_image_logits_serial(queries, qi, key, ki, params));
  }
}

void BM_LogitsParallel(benchmark::State& state) {
  const RotaryParams params;
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto queries = random_vectors(n, params.head_dim, 3);
  const auto key = random_vectors(1, params.head_dim, 4).front();
  const auto qi = random_points(n, 5);
  const auto ki = random_points(1024, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(text_image_logits(queries, qi, key, ki, params));
  }
}

}  // namespace

BENCHMARK(BM_PtdSerial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_PtdParallel)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_LogitsSerial)->Arg(16)->Arg(64);
BENCHMARK(BM_LogitsParallel)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
