/* Copyright 2026 The dcsa Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

// Wall-clock comparison of the serial reference paths and the OpenMP
// machine: naive vs difference-cover sequential builders, and the
// distributed builder with virtual processors run serially or in
// parallel threads.

#include <benchmark/benchmark.h>

#include <random>

#include "dcsa/parsa.hpp"
#include "dcsa/seqsa.hpp"

namespace {

using namespace dcsa;

Text random_text(index_t n, index_t sigma) {
  std::mt19937_64 rng(42);
  std::vector<index_t> s(static_cast<std::size_t>(n));
  for (auto& c : s) c = static_cast<index_t>(rng() % static_cast<std::uint64_t>(sigma));
  return encode_symbols(s);
}

void BM_Naive(benchmark::State& state) {
  const Text t = random_text(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(naive_suffix_array(t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Naive)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_DcFixed3(benchmark::State& state) {
  const Text t = random_text(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(dc_suffix_array(t, VSchedule::fixed(3)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DcFixed3)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_DcAccel(benchmark::State& state) {
  const Text t = random_text(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(dc_suffix_array(t, VSchedule::accelerated(5)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DcAccel)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void run_bsp_builder(benchmark::State& state, bsp::Execution execution) {
  const Text t = random_text(1 << 18, 4);
  const int p = static_cast<int>(state.range(0));
  ParallelOptions opts;
  opts.slack = SlackPolicy::relaxed;
  opts.machine.execution = execution;
  for (auto _ : state) benchmark::DoNotOptimize(bsp_suffix_array(t, bsp::Config{p}, opts));
  state.counters["p"] = p;
}

void BM_BspSerial(benchmark::State& state) { run_bsp_builder(state, bsp::Execution::serial); }
void BM_BspOpenMP(benchmark::State& state) { run_bsp_builder(state, bsp::Execution::parallel); }
BENCHMARK(BM_BspSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BspOpenMP)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
