#include <array>

#include <benchmark/benchmark.h>

#include "rmtsense/lss_clt.hpp"
#include "rmtsense/random.hpp"
#include "rmtsense/rmt_core.hpp"
#include "rmtsense/sensing_sim.hpp"
#include "rmtsense/spectral_laws.hpp"

namespace {

using namespace rmtsense;

void BM_EigenvaluesGeneral(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CMatrix m = gen_ginibre(n, n, 7).data();
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_general(m));
}
BENCHMARK(BM_EigenvaluesGeneral)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SveTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SnapshotMatrix x = gen_ginibre(n, 2 * n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sve_transform(x, 5));
}
BENCHMARK(BM_SveTransform)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ProductChain(benchmark::State& state) {
  const auto factors = static_cast<std::size_t>(state.range(0));
  const SnapshotEnsemble ensemble =
      acquire(SourceSpec::white_noise(), AcquisitionMode::TimeEvolving, 256, 512, factors, 9);
  PipelineOptions options;
  options.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(product_chain(ensemble, options));
}
BENCHMARK(BM_ProductChain)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ServerCompute(benchmark::State& state) {
  const SnapshotMatrix x = gen_ginibre(200, 400, 11);
  for (auto _ : state) benchmark::DoNotOptimize(server_compute(x));
}
BENCHMARK(BM_ServerCompute)->Unit(benchmark::kMillisecond);

void BM_HypergeometricNearEdge(benchmark::State& state) {
  const std::array<double, 3> a = {0.1, 0.2, 0.3};
  const std::array<double, 2> b = {0.7, 0.9};
  const double x = 1.0 - 1e-3 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hypergeometric_pfq(a, b, x));
}
BENCHMARK(BM_HypergeometricNearEdge)->Arg(1)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_GinibreProductPdf(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const double x = 0.5 * ginibre_support_max(k);
  for (auto _ : state) benchmark::DoNotOptimize(ginibre_product_pdf(x, k));
}
BENCHMARK(BM_GinibreProductPdf)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

void BM_CltQuadrature(benchmark::State& state) {
  const SpikeModel spikes({2.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(clt_quadrature(lrt_function(2.0), 2.0, spikes));
}
BENCHMARK(BM_CltQuadrature)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
