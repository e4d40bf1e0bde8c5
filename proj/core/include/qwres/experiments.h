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

#ifndef QWRES_EXPERIMENTS_H
#define QWRES_EXPERIMENTS_H

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwres/jones_optics.h"
#include "qwres/photon_stats.h"
#include "qwres/qelm.h"
#include "qwres/tasks.h"

namespace qwres {

enum class DatasetKind {
    kHaarQubit,
    kLocalRotationsHH,       // (U_A (x) U_B) |HH>
    kLocalRotationsPsiMinus  // (U_A (x) U_B) |Psi->
};

struct DatasetSpec {
    DatasetKind kind = DatasetKind::kHaarQubit;
    int size = 100;
    std::uint64_t seed = 0;
};

std::string to_string(DatasetKind kind);

/// A generated pure state. `factors` holds the single-qubit Jones vectors of product states
/// (one entry for a qubit, two for a product pair, none for entangled states).
struct StateSample {
    CVector amplitudes;
    std::vector<JonesVector> factors;

    CMatrix density() const { return amplitudes * amplitudes.adjoint(); }
};

std::vector<StateSample> generate_states(const DatasetSpec &spec);

/// Haar-distributed 2 x 2 unitary (QR of a complex Ginibre matrix with the phase fix).
Matrix2c haar_unitary(Rng &rng);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const Matrix4c &rho);

struct MonteCarloConfig {
    int resamples = 100;
    std::uint64_t seed = 0;
};

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over successful resamples
    int samples = 0;
};

struct MonteCarloResult {
    std::map<std::string, MetricSummary> metrics;
    int resamples = 0;
    int failures = 0;
};

/// Runs `pipeline` once per resample, each with its own generator seeded by mix_seed(seed, r),
/// and summarizes every returned metric. Throwing resamples are tallied and skipped.
MonteCarloResult monte_carlo_uncertainty(const std::function<std::map<std::string, double>(Rng &)> &pipeline,
                                         const MonteCarloConfig &cfg);

struct NoiseConfig {
    bool enabled = true;
    ClassicalNoise classical;        // training intensities
    std::int64_t shots = 3000;       // test counts per state
};

struct CurvePoint {
    int n_train = 0;
    double test_mse = 0.0;
    double sigma = 0.0;
};

struct ScatterPoint {
    std::string observable;
    double true_value = 0.0;
    double predicted_value = 0.0;
    std::string split;  // "train" or "test"
};

/// Rows: truly entangled / separable (true witness value < 0 or not).
/// Columns: predicted entangled / separable (predicted value < 0 or not).
struct Confusion {
    std::array<std::array<long, 2>, 2> counts{};
    long total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
};

struct ExperimentReport {
    std::vector<std::string> observables;
    double train_mse = 0.0;
    double test_mse = 0.0;
    std::vector<CurvePoint> learning_curve;
    std::vector<ScatterPoint> predictions;
    std::optional<Confusion> confusion;
    MonteCarloResult uncertainty;
    int readout_rank = 0;
    bool degenerate_features = false;
    RMatrix readout;
};

/// {5, 10, ..., 100}.
std::vector<int> default_curve_sizes();

struct PauliExperimentConfig {
    WalkSpec walk = WalkSpec::default_two_step();
    MeasurementSettings settings{0.0, 0.0};
    DatasetSpec train{DatasetKind::kHaarQubit, 100, 1};
    DatasetSpec test{DatasetKind::kHaarQubit, 100, 2};
    std::string observables = "XYZ";
    FeatureMode mode = FeatureMode::kRenormalized;
    NoiseConfig noise;
    std::vector<int> curve_sizes = default_curve_sizes();
    TrainOptions train_options;
    MonteCarloConfig monte_carlo;
    bool with_uncertainty = true;
    std::uint64_t seed = 0;  // noise draws
};

/// Trains on coherent-light intensities of the training states and tests, unchanged, on
/// single-photon counts of the test states.
ExperimentReport pauli_transfer_experiment(const PauliExperimentConfig &cfg);

struct WitnessExperimentConfig {
    WalkSpec walk1 = WalkSpec::default_two_step();
    WalkSpec walk2 = WalkSpec::default_two_step();
    MeasurementSettings settings1{0.0, 0.0};
    MeasurementSettings settings2{0.0, 0.0};
    DatasetSpec train{DatasetKind::kLocalRotationsHH, 400, 3};
    DatasetSpec test{DatasetKind::kLocalRotationsPsiMinus, 58, 4};
    BellState witness = BellState::kPsiPlus;
    FeatureMode mode = FeatureMode::kRenormalized;
    NoiseConfig noise{true, {}, 300};
    std::vector<int> curve_sizes{25, 50, 100, 200, 300, 400};
    TrainOptions train_options;
    MonteCarloConfig monte_carlo;
    bool with_uncertainty = true;
    std::uint64_t seed = 0;

    /// 400 training and 56 test states.
    static WitnessExperimentConfig robustness_preset();
};

/// Trains on two-branch coherent features of product states and tests on two-photon
/// coincidences of entangled states. A negative prediction classifies the state as entangled.
ExperimentReport witness_transfer_experiment(const WitnessExperimentConfig &cfg);

struct JitterSpec {
    double max_angle_offset_deg = 1.0;
    double max_delta_offset_rad = 0.0;
    std::uint64_t seed = 0;
    bool fresh_datasets = true;
};

struct RobustnessReport {
    ExperimentReport base;
    ExperimentReport perturbed;
    WalkSpec perturbed_walk1;
    WalkSpec perturbed_walk2;
};

/// Reruns the witness experiment on jittered walk internals, retraining the readout.
RobustnessReport robustness_rerun(const WitnessExperimentConfig &base, const JitterSpec &jitter);

/// (true positives + true negatives) / total.
double accuracy(const Confusion &confusion);

}  // namespace qwres

#endif  // QWRES_EXPERIMENTS_H
