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

#ifndef QWRES_RESERVOIR_OPT_H
#define QWRES_RESERVOIR_OPT_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qwres/linalg.h"

namespace qwres {

/// Projection angles in degrees, one entry per optimized coordinate.
using Angles = std::vector<double>;

/// A loss as measured on the (simulated) experiment.
///
/// Implementations must be deterministic for fixed (angles, seed) and safe to call concurrently.
/// The caller owns angle snapping: evaluate() uses the angles exactly as given.
class LossEvaluator {
   public:
    virtual ~LossEvaluator() = default;
    virtual std::vector<std::string> coordinate_names() const = 0;
    virtual double evaluate(const Angles &angles, std::uint64_t seed) const = 0;
    /// True when evaluate() ignores its seed, which lets callers cache results.
    virtual bool noiseless() const = 0;
};

/// Adapts a plain function into a LossEvaluator.
class FunctionLoss : public LossEvaluator {
   public:
    using Fn = std::function<double(const Angles &, std::uint64_t)>;
    FunctionLoss(std::vector<std::string> names, Fn fn, bool noiseless = true)
        : names_(std::move(names)), fn_(std::move(fn)), noiseless_(noiseless) {}

    std::vector<std::string> coordinate_names() const override { return names_; }
    double evaluate(const Angles &angles, std::uint64_t seed) const override { return fn_(angles, seed); }
    bool noiseless() const override { return noiseless_; }

   private:
    std::vector<std::string> names_;
    Fn fn_;
    bool noiseless_;
};

enum class GradientUnit {
    kRadian,  // g = dL/dnu with nu in radians; the update eta * g is converted back to degrees
    kDegree,
};

struct OptimizerConfig {
    double learning_rate = 0.8;
    double fd_step_deg = 2.87;
    double angle_grid_deg = 0.1;
    int minibatch_size = 15;
    int max_iters_per_coordinate = 50;
    int patience = 1;
    int max_sweeps = 100;
    long max_evaluations = 0;  // 0 means unlimited
    double improvement_floor = 1e-12;
    double period_deg = 180.0;  // wrap-around period; 0 disables wrapping
    GradientUnit gradient_unit = GradientUnit::kRadian;
    bool quantize = true;  // snap every evaluated angle to angle_grid_deg
    int retry_budget = 3;
    std::uint64_t seed = 0;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

struct FiniteDifference {
    double gradient = 0.0;
    double loss_plus = 0.0;
    double loss_minus = 0.0;
    Angles plus;
    Angles minus;
};

/// Options for a standalone central difference.
struct FdOptions {
    double step_deg = 2.87;
    double grid_deg = 0.0;  // snap displaced points when > 0
    double period_deg = 0.0;
    GradientUnit unit = GradientUnit::kRadian;
};

/// Wraps into [0, period) and snaps to the grid; either stage is skipped when its parameter is <= 0.
double normalize_angle(double angle_deg, double grid_deg, double period_deg);

/// Central difference (L(nu + eps) - L(nu - eps)) / (2 eps) along one coordinate, the other
/// coordinates held fixed. Throws GridCollision when snapping merges the displaced points.
FiniteDifference finite_diff_gradient(const std::function<double(const Angles &)> &loss, const Angles &at,
                                      int coordinate, const FdOptions &options);
FiniteDifference finite_diff_gradient(const LossEvaluator &loss, const Angles &at, int coordinate,
                                      const FdOptions &options, std::uint64_t seed = 0);

struct TraceStep {
    long evaluation = 0;   // evaluations spent when this point was recorded
    int sweep = 0;
    int iteration = 0;
    std::string coordinate;  // "init" for the starting point
    Angles angles;
    double loss = 0.0;
    double gradient = 0.0;
    double best_loss = 0.0;
};

struct OptimizationTrace {
    std::vector<std::string> coordinates;
    std::vector<TraceStep> steps;
    Angles init;
    Angles best;
    double best_loss = 0.0;
    long evaluations = 0;
    int sweeps = 0;
    bool failed = false;
    std::string failure;
};

/// Alternating finite-difference descent: each coordinate in turn follows nu <- snap(nu - eta g)
/// until the loss stops improving for `patience` iterations, then is fixed at its best value.
/// Sweeps repeat until one of them yields no improvement. Evaluator errors are retried up to
/// `retry_budget` times in total before the trace is returned flagged as failed.
OptimizationTrace coordinate_descent(const LossEvaluator &loss, const Angles &init, const OptimizerConfig &cfg);

struct GridAxis {
    double start = 0.0;
    double step = 1.0;
    int count = 1;

    double at(int k) const { return start + step * k; }
};

struct GridSpec {
    GridAxis axis1;
    GridAxis axis2;
    int repeats = 1;  // noisy evaluations per cell; the spread gives the per-cell uncertainty
    std::uint64_t seed = 0;

    // Both layouts span [0, 180] deg inclusive.
    static GridSpec si_20x20();  // 20 x 20, step 180/19 = 9.47 deg
    static GridSpec si_16x16();  // 16 x 16, step 12 deg
};

struct LandscapeGrid {
    GridSpec spec;
    RMatrix losses;  // (axis1 index, axis2 index); NaN where the cell failed
    RMatrix sigma;
    std::vector<std::vector<bool>> missing;
    int argmin1 = -1;
    int argmin2 = -1;

    double min_loss() const;
    int missing_count() const;
};

/// Evaluates every cell. Cells are independent; per-cell seeds are mix_seed(seed, cell * repeats + r).
/// The argmin tie-break is the first cell in row-major order.
LandscapeGrid landscape_scan(const LossEvaluator &loss, const GridSpec &spec, int threads = 1);

}  // namespace qwres

#endif  // QWRES_RESERVOIR_OPT_H
