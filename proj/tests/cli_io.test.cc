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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwres/config.h"
#include "qwres/errors.h"
#include "qwres/report_io.h"
#include "qwres/run.h"

using namespace qwres;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / ("qwres_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream s(text);
    for (std::string line; std::getline(s, line);) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream s(line);
    for (std::string cell; std::getline(s, cell, ',');) {
        out.push_back(cell);
    }
    return out;
}

RunResult run_text(const std::string &text, const fs::path &out) {
    RunOptions options;
    options.out_dir = out;
    options.quiet = true;
    return run(parse_config_text(text), options);
}

std::string field_of(const std::string &text) {
    try {
        parse_config_text(text);
    } catch (const ValidationError &e) {
        return e.field;
    }
    return "";
}

}  // namespace

TEST(parse_config, minimal_config_materializes_defaults) {
    RunConfig cfg = parse_config_text(R"({"task": "optimize", "seed": 5})");
    EXPECT_EQ(cfg.task, Task::kOptimize);
    EXPECT_EQ(cfg.objective, Objective::kPauli);
    EXPECT_EQ(cfg.seed, 5u);
    EXPECT_EQ(cfg.optimizer.learning_rate, 0.8);
    EXPECT_EQ(cfg.optimizer.fd_step_deg, 2.87);
    EXPECT_EQ(cfg.optimizer.angle_grid_deg, 0.1);
    EXPECT_EQ(cfg.optimizer.minibatch_size, 15);
    EXPECT_EQ(cfg.monte_carlo.resamples, 100);
    EXPECT_EQ(cfg.noise.shots, 3000);
    EXPECT_EQ(cfg.noise.classical.relative_error, 0.03);
    EXPECT_EQ(cfg.landscape.axis1.count, 20);
    EXPECT_EQ(cfg.init.size(), 2u);

    const auto &echo = cfg.echo;
    EXPECT_EQ(echo.at("optimizer").at("learning_rate"), 0.8);
    EXPECT_EQ(echo.at("optimizer").at("fd_step_deg"), 2.87);
    EXPECT_EQ(echo.at("monte_carlo").at("resamples"), 100);
    EXPECT_TRUE(echo.at("walk").contains("elements"));
}

TEST(parse_config, witness_defaults) {
    RunConfig cfg = parse_config_text(R"({"task": "witness"})");
    EXPECT_EQ(cfg.objective, Objective::kWitness);
    EXPECT_EQ(cfg.train.size, 400);
    EXPECT_EQ(cfg.test.size, 58);
    EXPECT_EQ(cfg.noise.shots, 300);
    RunConfig land = parse_config_text(R"({"task": "landscape", "objective": "witness"})");
    EXPECT_EQ(land.landscape.axis1.count, 16);
    EXPECT_EQ(land.landscape.axis1.step, 12.0);
}

TEST(parse_config, validation_names_field) {
    EXPECT_EQ(field_of(R"({"task": "optimize", "optimizer": {"learning_rate": -0.5}})"), "optimizer.learning_rate");
    EXPECT_EQ(field_of(R"({"task": "pauli", "walk": {"elemnts": []}})"), "walk.elemnts");
    EXPECT_EQ(field_of(R"({"task": "pauli", "sede": 3})"), "sede");
    EXPECT_EQ(field_of(R"({"seed": 3})"), "task");
    EXPECT_EQ(field_of(R"({"task": "pauli", "witness": "psi+"})"), "witness");
    EXPECT_EQ(field_of(R"({"task": "pauli", "noise": {"shots": 0}})"), "noise.shots");
    EXPECT_EQ(field_of(R"({"task": "pauli", "curve_sizes": [10, 5]})"), "curve_sizes");
    EXPECT_EQ(field_of(R"({"task": "pauli", "feature_mode": "raw"})"), "feature_mode");
    EXPECT_EQ(field_of(R"({"task": "pauli", "schema_version": 2})"), "schema_version");
}

TEST(parse_config, parse_error_location) {
    const std::string text = "{\n  \"task\": \"pauli\",\n  \"seed\": ,\n}\n";
    try {
        parse_config_text(text);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line, 3);
        EXPECT_GT(e.column, 0);
    }
}

TEST(parse_config, echo_round_trip) {
    const std::string text = R"({
        "task": "landscape", "seed": 11,
        "walk": {"elements": [{"kind": "hwp", "angle_deg": 22.5}, {"kind": "qplate", "charge": 0.5, "delta_rad": 3.0}]},
        "settings": {"theta_deg": 12.3, "phi_deg": 45.6},
        "noise": {"enabled": false},
        "landscape": {"axis1": {"start": 0, "step": 30, "count": 4}, "repeats": 2},
        "readout": {"ridge": 1e-6}
    })";
    RunConfig a = parse_config_text(text);
    RunConfig b = parse_config_text(a.echo.dump());
    EXPECT_EQ(a.echo, b.echo);
    EXPECT_EQ(b.echo.dump(), parse_config_text(b.echo.dump()).echo.dump());
    EXPECT_EQ(b.landscape.axis1.count, 4);
    EXPECT_EQ(b.landscape.repeats, 2);
    EXPECT_EQ(b.walk.elements.size(), 2u);
    EXPECT_EQ(*b.readout.ridge, 1e-6);
    EXPECT_EQ(b.landscape.seed, a.landscape.seed);
}

TEST(parse_config, seed_override_rederives_seeds) {
    RunConfig a = parse_config_text(R"({"task": "pauli", "seed": 1})");
    RunConfig b = parse_config_text(R"({"task": "pauli", "seed": 1})", 2);
    EXPECT_EQ(b.seed, 2u);
    EXPECT_NE(a.train.seed, b.train.seed);
    EXPECT_NE(a.noise_seed, b.noise_seed);
}

TEST(report_io, empty_curve_is_header_only) {
    EXPECT_EQ(learning_curve_csv({}), "n_train,test_mse,sigma\n");
    EXPECT_EQ(scatter_csv({}, "X"), "true_value,predicted_value,split\n");
}

TEST(report_io, full_precision_numbers) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    for (double x : {1.0 / 3.0, 2.87, 1e-300, -123456.789}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(report_io, confusion_json_layout) {
    Confusion c;
    c.counts = {{{30, 2}, {5, 21}}};
    nlohmann::json j = confusion_json(c);
    EXPECT_EQ(j.at("rows"), nlohmann::json({"true_entangled", "true_separable"}));
    EXPECT_EQ(j.at("columns"), nlohmann::json({"pred_entangled", "pred_separable"}));
    long sum = 0;
    for (const auto &row : j.at("counts")) {
        for (const auto &v : row) {
            sum += v.get<long>();
        }
    }
    EXPECT_EQ(sum, 58);
    EXPECT_EQ(j.at("total"), 58);
}

TEST(report_io, file_tokens) {
    EXPECT_EQ(file_token("W_psi+"), "W_psi_plus");
    EXPECT_EQ(file_token("W_phi-"), "W_phi_minus");
    EXPECT_EQ(file_token("Y"), "Y");
}

TEST(report_io, trace_columns) {
    OptimizationTrace t;
    t.coordinates = {"theta", "phi"};
    t.steps.push_back({1, 0, 0, "init", {1.5, 2.5}, 0.25, 0.0, 0.25});
    auto rows = lines(trace_csv(t));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "step,coordinate,theta_deg,phi_deg,loss");
    EXPECT_EQ(rows[1], "0,init,1.5,2.5,0.25");
}

TEST(report_io, unwritable_path_is_io_error) {
    fs::path dir = scratch("io_error");
    fs::create_directories(dir);
    write_file(dir / "blocker", "x");
    EXPECT_THROW(write_file(dir / "blocker" / "child.csv", "y"), IoError);
}

TEST(run, landscape_writes_si_grid) {
    fs::path out = scratch("landscape");
    RunResult r = run_text(R"({"task": "landscape", "seed": 3, "noise": {"enabled": false}})", out);
    ASSERT_EQ(r.exit_code, 0) << r.error;
    EXPECT_EQ(r.files.front(), "manifest.json");
    auto rows = lines(slurp(out / "landscape.csv"));
    ASSERT_EQ(rows.size(), 401u);
    EXPECT_EQ(rows[0], "theta_deg,phi_deg,mse,mse_sigma");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto cells = split(rows[i]);
        ASSERT_EQ(cells.size(), 4u);
        EXPECT_TRUE(std::isfinite(std::stod(cells[2])));
    }
    EXPECT_EQ(split(rows[400])[0], "180");
    auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    EXPECT_EQ(manifest.at("seed"), 3);
    EXPECT_EQ(manifest.at("task"), "landscape");
}

TEST(run, noiseless_pauli_reaches_exact_recovery) {
    fs::path out = scratch("pauli");
    RunResult r =
        run_text(R"({"task": "pauli", "feature_mode": "unconditional", "noise": {"enabled": false}})", out);
    ASSERT_EQ(r.exit_code, 0) << r.error;
    auto report = nlohmann::json::parse(slurp(out / "report.json"));
    EXPECT_LT(report.at("learning_curve").back().at("test_mse").get<double>(), 1e-10);
    EXPECT_EQ(report.at("learning_curve").back().at("n_train"), 100);
    for (const char *obs : {"X", "Y", "Z"}) {
        EXPECT_TRUE(fs::exists(out / ("scatter_" + std::string(obs) + ".csv")));
    }
    EXPECT_FALSE(fs::exists(out / "confusion.json"));
}

TEST(run, noiseless_witness_scatter_on_diagonal) {
    fs::path out = scratch("witness");
    RunResult r =
        run_text(R"({"task": "witness", "feature_mode": "unconditional", "noise": {"enabled": false}})", out);
    ASSERT_EQ(r.exit_code, 0) << r.error;
    auto rows = lines(slurp(out / "scatter_W_psi_plus.csv"));
    ASSERT_EQ(rows.size(), 1u + 400u + 58u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto cells = split(rows[i]);
        EXPECT_NEAR(std::stod(cells[0]), std::stod(cells[1]), 1e-9);
    }
    auto confusion = nlohmann::json::parse(slurp(out / "confusion.json"));
    EXPECT_EQ(confusion.at("total"), 58);
    EXPECT_EQ(confusion.at("counts")[0][1], 0);
    EXPECT_EQ(confusion.at("counts")[1][0], 0);
}

TEST(run, identical_configs_give_identical_bytes) {
    const std::string text = R"({"task": "pauli", "seed": 77, "monte_carlo": {"resamples": 5}})";
    fs::path a = scratch("det_a");
    fs::path b = scratch("det_b");
    RunResult ra = run_text(text, a);
    RunResult rb = run_text(text, b);
    ASSERT_EQ(ra.exit_code, 0) << ra.error;
    ASSERT_EQ(ra.files, rb.files);
    for (const auto &f : ra.files) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
}

TEST(run, optimize_writes_trace) {
    fs::path out = scratch("optimize");
    RunResult r = run_text(
        R"({"task": "optimize", "seed": 4, "noise": {"enabled": false}, "optimizer": {"max_evaluations": 40}})", out);
    ASSERT_EQ(r.exit_code, 0) << r.error;
    auto rows = lines(slurp(out / "trace.csv"));
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows[0], "step,coordinate,theta_deg,phi_deg,loss");
    EXPECT_EQ(split(rows[1])[1], "init");
    auto trace = nlohmann::json::parse(slurp(out / "trace.json"));
    EXPECT_LE(trace.at("evaluations").get<long>(), 40);
}

TEST(run, config_errors_leave_error_record) {
    fs::path dir = scratch("bad_config");
    fs::create_directories(dir);
    write_file(dir / "bad.json", R"({"task": "pauli", "optimizer": {"patience": 0}})");
    RunOptions options;
    options.out_dir = dir / "out";
    options.quiet = true;
    RunResult r = run_file(dir / "bad.json", std::nullopt, options);
    EXPECT_EQ(r.exit_code, 2);
    auto err = nlohmann::json::parse(slurp(dir / "out" / "error.json"));
    EXPECT_EQ(err.at("error"), "validation_error");
    EXPECT_EQ(err.at("field"), "optimizer.patience");
}

TEST(run, output_dir_precedence) {
    RunOptions none;
    ::unsetenv(kOutputDirEnv);
    EXPECT_EQ(resolve_output_dir(std::nullopt, none), fs::path("qwres_out"));
    ::setenv(kOutputDirEnv, "/tmp/from_env", 1);
    EXPECT_EQ(resolve_output_dir(std::nullopt, none), fs::path("/tmp/from_env"));
    EXPECT_EQ(resolve_output_dir(std::string("cfg_dir"), none), fs::path("cfg_dir"));
    RunOptions flag;
    flag.out_dir = "flag_dir";
    EXPECT_EQ(resolve_output_dir(std::string("cfg_dir"), flag), fs::path("flag_dir"));
    ::unsetenv(kOutputDirEnv);
}
