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

#include "qwres/run.h"

#include <cstdlib>
#include <iostream>

#include "qwres/errors.h"
#include "qwres/report_io.h"

#ifndef QWRES_VERSION
#define QWRES_VERSION "0.0.0"
#endif

namespace qwres {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve_output_dir(const std::optional<std::string> &config_dir, const RunOptions &options) {
    if (options.out_dir) {
        return *options.out_dir;
    }
    if (config_dir) {
        return *config_dir;
    }
    if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return "qwres_out";
}

json manifest_json(const RunConfig &cfg) {
    return {{"artifact", "qwres"},
            {"version", QWRES_VERSION},
            {"schema_version", kSchemaVersion},
            {"task", to_string(cfg.task)},
            {"seed", cfg.seed},
            {"config", cfg.echo}};
}

PauliExperimentConfig pauli_experiment_config(const RunConfig &cfg) {
    PauliExperimentConfig e;
    e.walk = cfg.walk;
    e.settings = cfg.settings;
    e.train = cfg.train;
    e.test = cfg.test;
    e.observables = cfg.observables;
    e.mode = cfg.mode;
    e.noise = cfg.noise;
    e.curve_sizes = cfg.curve_sizes;
    e.train_options = cfg.readout;
    e.monte_carlo = cfg.monte_carlo;
    e.with_uncertainty = cfg.monte_carlo_enabled;
    e.seed = cfg.noise_seed;
    return e;
}

WitnessExperimentConfig witness_experiment_config(const RunConfig &cfg) {
    WitnessExperimentConfig e;
    e.walk1 = cfg.walk;
    e.walk2 = cfg.walk2;
    e.settings1 = cfg.settings;
    e.settings2 = cfg.settings2;
    e.train = cfg.train;
    e.test = cfg.test;
    e.witness = cfg.witness;
    e.mode = cfg.mode;
    e.noise = cfg.noise;
    e.curve_sizes = cfg.curve_sizes;
    e.train_options = cfg.readout;
    e.monte_carlo = cfg.monte_carlo;
    e.with_uncertainty = cfg.monte_carlo_enabled;
    e.seed = cfg.noise_seed;
    return e;
}

std::unique_ptr<LossEvaluator> make_loss(const RunConfig &cfg) {
    std::optional<ClassicalNoise> noise;
    if (cfg.noise.enabled) {
        noise = cfg.noise.classical;
    }
    const auto states = generate_states(cfg.train);
    if (cfg.objective == Objective::kPauli) {
        PauliTaskSpec spec;
        spec.walk = cfg.walk;
        for (const auto &s : states) {
            spec.states.push_back(s.factors[0]);
        }
        spec.observables = {pauli(cfg.loss_observable[0])};
        spec.mode = cfg.mode;
        spec.noise = noise;
        spec.minibatch_size = cfg.optimizer.minibatch_size;
        spec.train = cfg.readout;
        return std::make_unique<PauliTaskLoss>(std::move(spec));
    }
    WitnessTaskSpec spec;
    spec.walk1 = cfg.walk;
    spec.walk2 = cfg.walk2;
    for (const auto &s : states) {
        spec.states.emplace_back(s.factors[0], s.factors[1]);
    }
    spec.witness = bell_witness(cfg.witness);
    spec.phi1_deg = cfg.settings.phi();
    spec.phi2_deg = cfg.settings2.phi();
    spec.mode = cfg.mode;
    spec.noise = noise;
    spec.minibatch_size = cfg.optimizer.minibatch_size;
    spec.train = cfg.readout;
    return std::make_unique<WitnessTaskLoss>(std::move(spec));
}

namespace {

class Writer {
   public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void text(const std::string &name, const std::string &contents) {
        write_file(dir_ / name, contents);
        files_.push_back(name);
    }
    void json_file(const std::string &name, const json &value) {
        write_json(dir_ / name, value);
        files_.push_back(name);
    }
    void plot(const ExperimentReport &report, const std::string &subdir = "") {
        fs::path target = subdir.empty() ? dir_ : dir_ / subdir;
        for (const auto &f : emit_plot_data(report, PlotFormat::kCsv, target)) {
            files_.push_back(subdir.empty() ? f : subdir + "/" + f);
        }
        json_file(subdir.empty() ? "report.json" : subdir + "/report.json", report_json(report));
    }

    std::vector<std::string> files() const { return files_; }

   private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::string uncertainty_csv(const MonteCarloResult &result) {
    std::string out = "metric,mean,stddev,samples\n";
    for (const auto &[name, s] : result.metrics) {
        out += name + "," + format_double(s.mean) + "," + format_double(s.stddev) + "," +
               std::to_string(s.samples) + "\n";
    }
    return out;
}

void log(const RunOptions &options, const std::string &message) {
    if (!options.quiet) {
        std::cerr << "qwres: " << message << "\n";
    }
}

json error_json(const std::exception &e) {
    json out = {{"error", "runtime_error"}, {"message", e.what()}};
    if (const auto *v = dynamic_cast<const ValidationError *>(&e)) {
        out["error"] = "validation_error";
        out["field"] = v->field;
    } else if (const auto *p = dynamic_cast<const ParseError *>(&e)) {
        out["error"] = "parse_error";
        out["line"] = p->line;
        out["column"] = p->column;
    } else if (dynamic_cast<const IoError *>(&e) != nullptr) {
        out["error"] = "io_error";
    } else if (dynamic_cast<const TruncationError *>(&e) != nullptr) {
        out["error"] = "truncation_error";
    } else if (dynamic_cast<const DegenerateInput *>(&e) != nullptr) {
        out["error"] = "degenerate_input";
    }
    return out;
}

void record_failure(RunResult &result, const std::exception &e, int code) {
    result.exit_code = code;
    result.error = e.what();
    try {
        write_json(result.out_dir / "error.json", error_json(e));
        result.files.push_back("error.json");
    } catch (const std::exception &) {
        // The error is still reported through the exit code and the message.
    }
}

}  // namespace

RunResult run(const RunConfig &cfg, const RunOptions &options) {
    RunResult result;
    result.out_dir = resolve_output_dir(cfg.output_dir, options);
    Writer out(result.out_dir);
    const int threads = options.threads.value_or(cfg.threads);
    try {
        out.json_file("manifest.json", manifest_json(cfg));
        log(options, "task " + to_string(cfg.task) + " -> " + result.out_dir.string());
        switch (cfg.task) {
            case Task::kPauli:
                out.plot(pauli_transfer_experiment(pauli_experiment_config(cfg)));
                break;
            case Task::kWitness:
                out.plot(witness_transfer_experiment(witness_experiment_config(cfg)));
                break;
            case Task::kOptimize: {
                auto loss = make_loss(cfg);
                OptimizationTrace trace = coordinate_descent(*loss, cfg.init, cfg.optimizer);
                out.text("trace.csv", trace_csv(trace));
                out.json_file("trace.json", trace_json(trace));
                log(options, "best loss " + format_double(trace.best_loss) + " after " +
                                 std::to_string(trace.evaluations) + " evaluations");
                break;
            }
            case Task::kLandscape: {
                auto loss = make_loss(cfg);
                LandscapeGrid grid = landscape_scan(*loss, cfg.landscape, threads);
                out.text("landscape.csv", landscape_csv(grid, loss->coordinate_names()));
                out.json_file("landscape.json", landscape_json(grid, loss->coordinate_names()));
                break;
            }
            case Task::kResample: {
                ExperimentReport report;
                if (cfg.objective == Objective::kPauli) {
                    auto e = pauli_experiment_config(cfg);
                    e.with_uncertainty = true;
                    report = pauli_transfer_experiment(e);
                } else {
                    auto e = witness_experiment_config(cfg);
                    e.with_uncertainty = true;
                    report = witness_transfer_experiment(e);
                }
                out.text("uncertainty.csv", uncertainty_csv(report.uncertainty));
                out.plot(report);
                break;
            }
            case Task::kRobustness: {
                RobustnessReport r = robustness_rerun(witness_experiment_config(cfg), cfg.jitter);
                out.plot(r.base, "base");
                out.plot(r.perturbed, "perturbed");
                out.json_file("robustness.json",
                              {{"base_test_mse", r.base.test_mse},
                               {"perturbed_test_mse", r.perturbed.test_mse},
                               {"base_accuracy", accuracy(*r.base.confusion)},
                               {"perturbed_accuracy", accuracy(*r.perturbed.confusion)},
                               {"perturbed_walk1", walk_to_json(r.perturbed_walk1)},
                               {"perturbed_walk2", walk_to_json(r.perturbed_walk2)}});
                break;
            }
        }
    } catch (const std::exception &e) {
        result.files = out.files();
        record_failure(result, e, 1);
        log(options, std::string("error: ") + e.what());
        return result;
    }
    result.files = out.files();
    return result;
}

RunResult run_file(const fs::path &config_path, std::optional<std::uint64_t> seed_override,
                   const RunOptions &options) {
    RunConfig cfg;
    try {
        cfg = parse_config(config_path, seed_override);
    } catch (const std::exception &e) {
        RunResult result;
        result.out_dir = resolve_output_dir(std::nullopt, options);
        record_failure(result, e, 2);
        log(options, std::string("error: ") + e.what());
        return result;
    }
    return run(cfg, options);
}

}  // namespace qwres
