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

#ifndef QWRES_REPORT_IO_H
#define QWRES_REPORT_IO_H

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwres/experiments.h"
#include "qwres/reservoir_opt.h"

namespace qwres {

/// Shortest-safe full precision ("%.17g"); "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double x);

/// Column layouts are frozen:
///   learning curve  n_train,test_mse,sigma
///   scatter         true_value,predicted_value,split
///   trace           step,coordinate,theta_deg,phi_deg,loss   (<name>_deg per coordinate otherwise)
///   landscape       theta_deg,phi_deg,mse,mse_sigma
std::string learning_curve_csv(const std::vector<CurvePoint> &curve);
std::string scatter_csv(const std::vector<ScatterPoint> &points, const std::string &observable);
std::string trace_csv(const OptimizationTrace &trace);
std::string landscape_csv(const LandscapeGrid &grid, const std::vector<std::string> &coordinates);

nlohmann::json confusion_json(const Confusion &confusion);
nlohmann::json report_json(const ExperimentReport &report);
nlohmann::json trace_json(const OptimizationTrace &trace);
nlohmann::json landscape_json(const LandscapeGrid &grid, const std::vector<std::string> &coordinates);
nlohmann::json monte_carlo_json(const MonteCarloResult &result);

/// Writes `contents` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path &path, const std::string &contents);
void write_json(const std::filesystem::path &path, const nlohmann::json &value);

enum class PlotFormat { kCsv, kJson };

/// Learning curve, per-observable scatter and (if present) confusion matrix. Returns the
/// written file names relative to `dir`.
std::vector<std::string> emit_plot_data(const ExperimentReport &report, PlotFormat format,
                                        const std::filesystem::path &dir);

/// File-name-safe form of an observable label ("W_psi+" -> "W_psi_plus").
std::string file_token(const std::string &label);

}  // namespace qwres

#endif  // QWRES_REPORT_IO_H
