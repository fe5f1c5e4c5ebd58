#include <benchmark/benchmark.h>

#include "ttwist/fixtures.hpp"
#include "ttwist/random.hpp"

using namespace ttwist;

namespace {

// A complex with random invertible blocks: 0 -> Q^n -> Q^n -> 0 conjugated.
BasedComplex random_iso_complex(size_t n, std::mt19937_64& rng) {
  return BasedComplex(0, {n, n}, {random_invertible(n, rng)});
}

void BM_KmScalar(benchmark::State& state) {
  std::mt19937_64 rng(1);
  BasedComplex c = random_iso_complex(static_cast<size_t>(state.range(0)), rng);
  CohomologyBases h = default_cohomology_bases(c);
  for (auto _ : state) benchmark::DoNotOptimize(km_scalar(c, h));
}
BENCHMARK(BM_KmScalar)->Arg(8)->Arg(16)->Arg(32);

void BM_Lemma1S1xS2(benchmark::State& state) {
  auto f = fixture_s1_s2();
  MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
  Z2Bases h = default_z2_bases(mw.z);
  for (auto _ : state) benchmark::DoNotOptimize(lemma1_scalar(mw.z, h));
}
BENCHMARK(BM_Lemma1S1xS2)->Unit(benchmark::kMillisecond);

void BM_LadderS3(benchmark::State& state) {
  auto f = fixture_s3();
  Twist t = twist_from_theta(f->complex, f->theta);
  for (auto _ : state) {
    DupontSpace du(f->complex, *f->rep);
    benchmark::DoNotOptimize(stabilized_twisted_cohomology(du, t).dims);
  }
}
BENCHMARK(BM_LadderS3)->Unit(benchmark::kMillisecond);

void BM_TauTwistS3(benchmark::State& state) {
  auto f = fixture_s3();
  MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
  for (auto _ : state) benchmark::DoNotOptimize(tau_twist(mw).value.coordinate());
}
BENCHMARK(BM_TauTwistS3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
