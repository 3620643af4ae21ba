// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "sede/kernels.hpp"
#include "sede/rng.hpp"

using namespace sede;

namespace {

struct Batch {
  CurvePtr                  curve = Curve::secp256k1();
  CurvePoint                PR, PG;
  FieldElement              k;
  std::vector<CurvePoint>   msgs;
  std::vector<FieldElement> r1, r2;

  explicit Batch(std::size_t n) {
    Rng rng(Rng::derive(5, "bench"));
    PR = curve->mul_base(curve->random_scalar(rng));
    PG = curve->mul_base(curve->random_scalar(rng));
    k  = curve->random_scalar(rng);
    for (std::size_t i = 0; i < n; ++i) {
      msgs.push_back(curve->mul_base(curve->random_scalar(rng)));
      r1.push_back(curve->random_scalar(rng));
      r2.push_back(curve->random_scalar(rng));
    }
  }
};

const Batch& batch(std::size_t n) {
  static std::map<std::size_t, Batch> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Batch(n)).first;
  return it->second;
}

template <bool Parallel>
void BM_ScalePoints(benchmark::State& state) {
  const auto& b = batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? kernels::parallel::scale_points(*b.curve, b.k, b.msgs)
                        : kernels::serial::scale_points(*b.curve, b.k, b.msgs);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_EncryptCombined(benchmark::State& state) {
  const auto& b = batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? kernels::parallel::encrypt_combined_many(*b.curve, b.PR, b.PG, b.msgs, b.r1)
                        : kernels::serial::encrypt_combined_many(*b.curve, b.PR, b.PG, b.msgs, b.r1);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_EncryptDouble(benchmark::State& state) {
  const auto& b = batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? kernels::parallel::encrypt_double_many(*b.curve, b.PR, b.PG, b.msgs, b.r1, b.r2)
                        : kernels::serial::encrypt_double_many(*b.curve, b.PR, b.PG, b.msgs, b.r1, b.r2);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ScanSpends(benchmark::State& state) {
  const auto txs_n = static_cast<std::size_t>(state.range(0));
  Rng        rng(Rng::derive(6, "bench-scan"));
  std::vector<TransactionPayload> txs(txs_n);
  kernels::NullifierTargets       targets;
  for (auto& tx : txs) {
    for (int j = 0; j < 2; ++j) {
      Nullifier nf{rng.element(hash_field())};
      tx.spent_nullifiers.push_back(nf);
      if (rng.below(8) == 0) targets.emplace(nf, targets.size());
    }
  }
  for (auto _ : state) {
    auto out = Parallel ? kernels::parallel::scan_spends(txs, targets) : kernels::serial::scan_spends(txs, targets);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ScalePoints<false>)->Name("scale_points/serial")->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScalePoints<true>)->Name("scale_points/parallel")->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncryptCombined<false>)->Name("encrypt_combined/serial")->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncryptCombined<true>)->Name("encrypt_combined/parallel")->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncryptDouble<false>)->Name("encrypt_double/serial")->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncryptDouble<true>)->Name("encrypt_double/parallel")->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSpends<false>)->Name("scan_spends/serial")->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSpends<true>)->Name("scan_spends/parallel")->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
