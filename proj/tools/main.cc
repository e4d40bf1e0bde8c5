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

// qwres: runs one simulated transfer-learning experiment described by a JSON config.
//
//     qwres --config configs/pauli.json --out results/pauli
//
// The output directory receives manifest.json first, then the task's CSV/JSON data files.
// On failure it receives error.json and the exit status is nonzero.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#ifdef QWRES_CLI11_SINGLE_HEADER
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif
#include "qwres/run.h"

int main(int argc, char **argv) {
    CLI::App app{"Quantum-walk reservoir simulator: classical-to-quantum transfer of linear readouts"};
    app.set_version_flag("--version", std::string(QWRES_VERSION_STRING));

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    bool quiet = false;
    app.add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    auto *out_opt = app.add_option("--out", out_dir, "Output directory (default: config output_dir, then $" +
                                                         std::string(qwres::kOutputDirEnv) + ", then qwres_out)");
    auto *seed_opt = app.add_option("--seed", seed, "Override the config's top-level seed");
    auto *threads_opt = app.add_option("--threads", threads, "Worker threads for grid scans")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "Suppress progress messages");

    CLI11_PARSE(app, argc, argv);

    qwres::RunOptions options;
    options.quiet = quiet;
    if (*out_opt) {
        options.out_dir = out_dir;
    }
    if (*threads_opt) {
        options.threads = threads;
    }
    std::optional<std::uint64_t> seed_override;
    if (*seed_opt) {
        seed_override = seed;
    }

    qwres::RunResult result = qwres::run_file(config_path, seed_override, options);
    if (result.exit_code != 0) {
        std::cerr << "qwres: " << result.error << "\n";
        return result.exit_code;
    }
    if (!quiet) {
        for (const auto &f : result.files) {
            std::cout << (result.out_dir / f).string() << "\n";
        }
    }
    return 0;
}
