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

#ifndef QWRES_RUN_H
#define QWRES_RUN_H

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwres/config.h"

namespace qwres {

/// Environment variable naming the default output directory.
inline constexpr const char *kOutputDirEnv = "QWRES_OUTPUT_DIR";

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  // overrides the config and the environment
    std::optional<int> threads;
    bool quiet = false;
};

struct RunResult {
    int exit_code = 0;
    std::filesystem::path out_dir;
    std::vector<std::string> files;  // relative to out_dir, in write order
    std::string error;
};

/// --out, then the config's output_dir, then $QWRES_OUTPUT_DIR, then "qwres_out".
std::filesystem::path resolve_output_dir(const std::optional<std::string> &config_dir, const RunOptions &options);

nlohmann::json manifest_json(const RunConfig &cfg);

PauliExperimentConfig pauli_experiment_config(const RunConfig &cfg);
WitnessExperimentConfig witness_experiment_config(const RunConfig &cfg);
/// The optimize/landscape loss selected by the config's objective.
std::unique_ptr<LossEvaluator> make_loss(const RunConfig &cfg);

/// Writes manifest.json, then the task's data files. Failures leave error.json and a nonzero exit code.
RunResult run(const RunConfig &cfg, const RunOptions &options = {});

/// Parses `config_path` and runs it; configuration errors are reported the same way (exit code 2).
RunResult run_file(const std::filesystem::path &config_path, std::optional<std::uint64_t> seed_override,
                   const RunOptions &options = {});

}  // namespace qwres

#endif  // QWRES_RUN_H
