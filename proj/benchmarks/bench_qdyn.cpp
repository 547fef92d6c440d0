// Copyright 2026 The qdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qdyn/channels.hpp"
#include "qdyn/dynamical.hpp"
#include "qdyn/entropies.hpp"
#include "qdyn/haar.hpp"

namespace {

using namespace qdyn;

void BM_HermEig(benchmark::State& state) {
  const Index dim = state.range(0);
  HaarSampler s(dim, 1);
  const HermitianOperator h = s.mixed_state(dim).op();
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(h));
}
BENCHMARK(BM_HermEig)->Arg(4)->Arg(16)->Arg(64);

void BM_HaarUnitary(benchmark::State& state) {
  const Index dim = state.range(0);
  HaarSampler s(dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(haar_unitary(dim, s));
}
BENCHMARK(BM_HaarUnitary)->Arg(2)->Arg(4)->Arg(16);

void BM_CondMinEntropySdp(benchmark::State& state) {
  const Index d = state.range(0);
  HaarSampler s(d * d, 3);
  const HermitianOperator rho = s.mixed_state(d * d).op().with_dims({d, d});
  for (auto _ : state) benchmark::DoNotOptimize(cond_min_entropy_up_sdp(rho));
}
BENCHMARK(BM_CondMinEntropySdp)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ChannelMinEntropyClosedForm(benchmark::State& state) {
  HaarSampler s(2, 4);
  const QuantumChannel n = random_channel(2, 2, 3, s);
  for (auto _ : state) benchmark::DoNotOptimize(channel_min_entropy(n));
}
BENCHMARK(BM_ChannelMinEntropyClosedForm);

void BM_DiamondDistanceSdp(benchmark::State& state) {
  const Index d = state.range(0);
  HaarSampler s(d, 5);
  const QuantumChannel a = random_channel(d, d, 2, s);
  const QuantumChannel b = random_channel(d, d, 2, s);
  for (auto _ : state) benchmark::DoNotOptimize(diamond_distance_sdp(a, b));
}
BENCHMARK(BM_DiamondDistanceSdp)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
