// Copyright 2026 The Herald Authors
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

#include "benchmark/benchmark.h"

#include "herald/protocols.h"
#include "herald/runner.h"

using namespace herald;

namespace {

Protocol double_herald(double eta) {
    ProtocolParams p;
    p.detector.efficiency = eta;
    return build_protocol(ProtocolKind::DoubleHerald, p);
}

Protocol ghz(std::size_t n) {
    ProtocolParams p;
    p.detector.efficiency = 0.8;
    p.multiphoton = MultiPhotonSpec::ghz(n, PhotonEncoding::Polarization);
    return build_protocol(ProtocolKind::MultiPhoton, p);
}

}  // namespace

static void enumerate_double_herald(benchmark::State &state) {
    auto protocol = double_herald(0.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate(protocol));
    }
}
BENCHMARK(enumerate_double_herald);

static void enumerate_multiphoton(benchmark::State &state) {
    auto protocol = ghz(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate(protocol));
    }
}
BENCHMARK(enumerate_multiphoton)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void sample_double_herald(benchmark::State &state) {
    auto tree = enumerate(double_herald(0.8));
    SampleOptions opts{100000, 1, static_cast<unsigned>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(tree, opts));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.shots));
}
BENCHMARK(sample_double_herald)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void sample_multiphoton(benchmark::State &state) {
    auto tree = enumerate(ghz(2));
    SampleOptions opts{100000, 1, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(tree, opts));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.shots));
}
BENCHMARK(sample_multiphoton)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
