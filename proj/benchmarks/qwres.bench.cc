// Copyright 2026 The qwres Authors
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

#include "qwres/experiments.h"
#include "qwres/jones_optics.h"
#include "qwres/qelm.h"
#include "qwres/reservoir_opt.h"
#include "qwres/tasks.h"

using namespace qwres;

namespace {

std::vector<JonesVector> haar(int n) {
    std::vector<JonesVector> out;
    for (const auto &s : generate_states({DatasetKind::kHaarQubit, n, 1})) {
        out.push_back(s.factors[0]);
    }
    return out;
}

void BM_build_walk(benchmark::State &state) {
    WalkSpec spec = WalkSpec::default_two_step();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_walk(spec));
    }
}
BENCHMARK(BM_build_walk);

void BM_transfer(benchmark::State &state) {
    Reservoir r(WalkSpec::default_two_step());
    double theta = 0.0;
    for (auto _ : state) {
        theta += 0.1;
        benchmark::DoNotOptimize(r.transfer({theta, 12.0}));
    }
}
BENCHMARK(BM_transfer);

void BM_two_line_transfer(benchmark::State &state) {
    WalkSpec w = WalkSpec::default_two_step();
    for (auto _ : state) {
        benchmark::DoNotOptimize(two_line_transfer(w, {10.0, 0.0}, w, {20.0, 0.0}));
    }
}
BENCHMARK(BM_two_line_transfer);

void BM_train(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    TransferMatrix t = Reservoir(WalkSpec::default_two_step()).transfer({0.0, 0.0});
    auto states = haar(n);
    RMatrix p = coherent_feature_matrix(t, states, FeatureMode::kRenormalized);
    std::vector<CMatrix> rhos;
    for (const auto &c : states) {
        rhos.push_back(c.vector() * c.vector().adjoint());
    }
    RMatrix y = build_targets({pauli('X'), pauli('Y'), pauli('Z')}, rhos);
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(p, y));
    }
}
BENCHMARK(BM_train)->Arg(15)->Arg(100)->Arg(400);

void BM_pauli_loss(benchmark::State &state) {
    PauliTaskSpec spec;
    spec.states = haar(15);
    spec.observables = {pauli('Y')};
    PauliTaskLoss loss(spec);
    double theta = 0.0;
    for (auto _ : state) {
        theta += 0.1;
        benchmark::DoNotOptimize(loss.evaluate({theta, 30.0}, 0));
    }
}
BENCHMARK(BM_pauli_loss);

void BM_landscape_20x20(benchmark::State &state) {
    PauliTaskSpec spec;
    spec.states = haar(15);
    spec.observables = {pauli('Y')};
    PauliTaskLoss loss(spec);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(landscape_scan(loss, GridSpec::si_20x20(), threads));
    }
}
BENCHMARK(BM_landscape_20x20)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_witness_experiment_noiseless(benchmark::State &state) {
    WitnessExperimentConfig cfg;
    cfg.mode = FeatureMode::kUnconditional;
    cfg.noise.enabled = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(witness_transfer_experiment(cfg));
    }
}
BENCHMARK(BM_witness_experiment_noiseless)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
