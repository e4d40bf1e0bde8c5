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

#ifndef QWRES_CONFIG_H
#define QWRES_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwres/experiments.h"
#include "qwres/reservoir_opt.h"

namespace qwres {

inline constexpr int kSchemaVersion = 1;

enum class Task { kPauli, kWitness, kOptimize, kLandscape, kResample, kRobustness };
/// Which loss/pipeline the optimize, landscape and resample tasks act on.
enum class Objective { kPauli, kWitness };

std::string to_string(Task task);
std::string to_string(Objective objective);
std::string to_string(FeatureMode mode);

/// A fully validated run description with every default materialized.
struct RunConfig {
    Task task = Task::kPauli;
    Objective objective = Objective::kPauli;
    std::uint64_t seed = 0;
    std::optional<std::string> output_dir;
    int threads = 1;

    WalkSpec walk;
    WalkSpec walk2;
    MeasurementSettings settings;
    MeasurementSettings settings2;
    FeatureMode mode = FeatureMode::kRenormalized;
    NoiseConfig noise;
    std::uint64_t noise_seed = 0;
    DatasetSpec train;
    DatasetSpec test;
    std::string observables;
    BellState witness = BellState::kPsiPlus;
    std::vector<int> curve_sizes;
    TrainOptions readout;
    bool monte_carlo_enabled = true;
    MonteCarloConfig monte_carlo;
    OptimizerConfig optimizer;
    Angles init;
    std::string loss_observable;  // pauli objective of optimize/landscape
    GridSpec landscape;
    JitterSpec jitter;

    /// Canonical JSON echo; parsing it again yields the same config.
    nlohmann::json echo;
};

/// Parses and validates a JSON config. `seed_override` replaces the top-level seed before
/// derived seeds are materialized. Throws ParseError or ValidationError.
RunConfig parse_config_text(const std::string &text, std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig parse_config(const std::filesystem::path &path,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

nlohmann::json walk_to_json(const WalkSpec &walk);

}  // namespace qwres

#endif  // QWRES_CONFIG_H
