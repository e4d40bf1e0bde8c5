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

#include "qwres/reservoir_opt.h"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "qwres/errors.h"
#include "qwres/jones_optics.h"

namespace qwres {

void OptimizerConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ValidationError("optimizer.learning_rate", "must be a positive finite number");
    }
    if (!(angle_grid_deg >= 0.0) || !std::isfinite(angle_grid_deg)) {
        throw ValidationError("optimizer.angle_grid_deg", "must be nonnegative");
    }
    if (!(fd_step_deg > 0.0) || fd_step_deg < angle_grid_deg) {
        throw ValidationError("optimizer.fd_step_deg", "must be positive and at least angle_grid_deg");
    }
    if (minibatch_size < 1) {
        throw ValidationError("optimizer.minibatch_size", "must be >= 1");
    }
    if (max_iters_per_coordinate < 1) {
        throw ValidationError("optimizer.max_iters_per_coordinate", "must be >= 1");
    }
    if (patience < 1) {
        throw ValidationError("optimizer.patience", "must be >= 1");
    }
    if (max_sweeps < 1) {
        throw ValidationError("optimizer.max_sweeps", "must be >= 1");
    }
    if (max_evaluations < 0) {
        throw ValidationError("optimizer.max_evaluations", "must be >= 0");
    }
    if (!(improvement_floor >= 0.0)) {
        throw ValidationError("optimizer.improvement_floor", "must be nonnegative");
    }
    if (!(period_deg >= 0.0)) {
        throw ValidationError("optimizer.period_deg", "must be nonnegative");
    }
    if (retry_budget < 0) {
        throw ValidationError("optimizer.retry_budget", "must be >= 0");
    }
}

double normalize_angle(double angle_deg, double grid_deg, double period_deg) {
    double a = angle_deg;
    if (period_deg > 0.0) {
        a = std::fmod(a, period_deg);
        if (a < 0.0) {
            a += period_deg;
        }
    }
    if (grid_deg > 0.0) {
        a = snap_to_grid(a, grid_deg);
        if (period_deg > 0.0 && a >= period_deg - 0.5 * grid_deg) {
            a = 0.0;
        }
    }
    return a;
}

namespace {

double unit_scale(GradientUnit unit) { return unit == GradientUnit::kRadian ? kPi / 180.0 : 1.0; }

}  // namespace

FiniteDifference finite_diff_gradient(const std::function<double(const Angles &)> &loss, const Angles &at,
                                      int coordinate, const FdOptions &options) {
    if (coordinate < 0 || static_cast<std::size_t>(coordinate) >= at.size()) {
        throw std::out_of_range("finite_diff_gradient: coordinate index out of range");
    }
    FiniteDifference fd;
    fd.plus = at;
    fd.minus = at;
    const double center = at[static_cast<std::size_t>(coordinate)];
    double hi = center + options.step_deg;
    double lo = center - options.step_deg;
    if (options.grid_deg > 0.0) {
        hi = snap_to_grid(hi, options.grid_deg);
        lo = snap_to_grid(lo, options.grid_deg);
    }
    if (!(hi > lo)) {
        throw GridCollision("finite difference step collapses on the angle grid");
    }
    fd.plus[static_cast<std::size_t>(coordinate)] = normalize_angle(hi, 0.0, options.period_deg);
    fd.minus[static_cast<std::size_t>(coordinate)] = normalize_angle(lo, 0.0, options.period_deg);
    fd.loss_plus = loss(fd.plus);
    fd.loss_minus = loss(fd.minus);
    fd.gradient = (fd.loss_plus - fd.loss_minus) / ((hi - lo) * unit_scale(options.unit));
    return fd;
}

FiniteDifference finite_diff_gradient(const LossEvaluator &loss, const Angles &at, int coordinate,
                                      const FdOptions &options, std::uint64_t seed) {
    std::uint64_t calls = 0;
    return finite_diff_gradient([&](const Angles &a) { return loss.evaluate(a, mix_seed(seed, calls++)); }, at,
                                coordinate, options);
}

namespace {

struct BudgetExhausted {};
struct RetriesExhausted {
    std::string what;
};

/// Counts, caches and retries evaluator calls for one descent run.
class EvaluationLedger {
   public:
    EvaluationLedger(const LossEvaluator &loss, const OptimizerConfig &cfg) : loss_(loss), cfg_(cfg) {}

    double operator()(const Angles &angles) {
        std::vector<long> key;
        if (loss_.noiseless()) {
            const double unit = cfg_.quantize && cfg_.angle_grid_deg > 0.0 ? cfg_.angle_grid_deg : 1e-9;
            for (double a : angles) {
                key.push_back(std::lround(a / unit));
            }
            auto it = cache_.find(key);
            if (it != cache_.end()) {
                return it->second;
            }
        }
        while (true) {
            if (cfg_.max_evaluations > 0 && evaluations_ >= cfg_.max_evaluations) {
                throw BudgetExhausted{};
            }
            std::uint64_t seed = mix_seed(cfg_.seed, static_cast<std::uint64_t>(evaluations_));
            ++evaluations_;
            try {
                double value = loss_.evaluate(angles, seed);
                if (!std::isfinite(value)) {
                    throw Error("loss evaluator returned a non-finite value");
                }
                if (loss_.noiseless()) {
                    cache_.emplace(key, value);
                }
                return value;
            } catch (const std::exception &e) {
                if (++failures_ > cfg_.retry_budget) {
                    throw RetriesExhausted{e.what()};
                }
            }
        }
    }

    long evaluations() const { return evaluations_; }

   private:
    const LossEvaluator &loss_;
    const OptimizerConfig &cfg_;
    std::map<std::vector<long>, double> cache_;
    long evaluations_ = 0;
    int failures_ = 0;
};

}  // namespace

OptimizationTrace coordinate_descent(const LossEvaluator &loss, const Angles &init, const OptimizerConfig &cfg) {
    cfg.validate();
    OptimizationTrace trace;
    trace.coordinates = loss.coordinate_names();
    if (init.size() != trace.coordinates.size()) {
        throw DimensionMismatch("coordinate_descent: initial angles do not match the loss coordinates");
    }
    const double grid = cfg.quantize ? cfg.angle_grid_deg : 0.0;
    for (double a : init) {
        trace.init.push_back(normalize_angle(a, grid, cfg.period_deg));
    }
    const FdOptions fd_options{cfg.fd_step_deg, grid, cfg.period_deg, cfg.gradient_unit};
    const double to_degrees = 1.0 / unit_scale(cfg.gradient_unit);

    EvaluationLedger evaluate(loss, cfg);
    auto record = [&](int sweep, int iteration, const std::string &coordinate, const Angles &angles, double value,
                      double gradient) {
        trace.steps.push_back(
            {evaluate.evaluations(), sweep, iteration, coordinate, angles, value, gradient, trace.best_loss});
    };

    try {
        trace.best = trace.init;
        trace.best_loss = evaluate(trace.best);
        record(0, 0, "init", trace.best, trace.best_loss, 0.0);
        for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
            trace.sweeps = sweep;
            bool improved = false;
            for (std::size_t k = 0; k < trace.coordinates.size(); ++k) {
                Angles current = trace.best;
                int stale = 0;
                for (int it = 1; it <= cfg.max_iters_per_coordinate; ++it) {
                    FiniteDifference fd =
                        finite_diff_gradient([&](const Angles &a) { return evaluate(a); }, current,
                                             static_cast<int>(k), fd_options);
                    if (fd.gradient == 0.0) {
                        break;
                    }
                    double step = -cfg.learning_rate * fd.gradient * to_degrees;
                    if (grid > 0.0 && std::abs(step) < grid) {
                        step = std::copysign(grid, step);
                    }
                    current[k] = normalize_angle(current[k] + step, grid, cfg.period_deg);
                    double value = evaluate(current);
                    if (value < trace.best_loss - cfg.improvement_floor) {
                        trace.best = current;
                        trace.best_loss = value;
                        improved = true;
                        stale = 0;
                    } else {
                        ++stale;
                    }
                    record(sweep, it, trace.coordinates[k], current, value, fd.gradient);
                    if (stale >= cfg.patience) {
                        break;
                    }
                }
            }
            if (!improved) {
                break;
            }
        }
    } catch (const BudgetExhausted &) {
        // Keep the best point found within the budget.
    } catch (const RetriesExhausted &e) {
        trace.failed = true;
        trace.failure = e.what;
    }
    trace.evaluations = evaluate.evaluations();
    if (trace.best.empty()) {
        trace.best = trace.init;
        trace.best_loss = std::numeric_limits<double>::quiet_NaN();
    }
    return trace;
}

GridSpec GridSpec::si_20x20() { return {{0.0, 180.0 / 19.0, 20}, {0.0, 180.0 / 19.0, 20}, 1, 0}; }

GridSpec GridSpec::si_16x16() { return {{0.0, 12.0, 16}, {0.0, 12.0, 16}, 1, 0}; }

double LandscapeGrid::min_loss() const {
    if (argmin1 < 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return losses(argmin1, argmin2);
}

int LandscapeGrid::missing_count() const {
    int n = 0;
    for (const auto &row : missing) {
        for (bool m : row) {
            n += m ? 1 : 0;
        }
    }
    return n;
}

LandscapeGrid landscape_scan(const LossEvaluator &loss, const GridSpec &spec, int threads) {
    if (spec.axis1.count < 1 || spec.axis2.count < 1) {
        throw std::invalid_argument("landscape_scan: axis counts must be >= 1");
    }
    if (spec.repeats < 1) {
        throw std::invalid_argument("landscape_scan: repeats must be >= 1");
    }
    if (loss.coordinate_names().size() != 2) {
        throw DimensionMismatch("landscape_scan: loss must have exactly two coordinates");
    }
    const int n1 = spec.axis1.count;
    const int n2 = spec.axis2.count;
    LandscapeGrid grid;
    grid.spec = spec;
    grid.losses = RMatrix::Constant(n1, n2, std::numeric_limits<double>::quiet_NaN());
    grid.sigma = RMatrix::Zero(n1, n2);
    grid.missing.assign(static_cast<std::size_t>(n1), std::vector<bool>(static_cast<std::size_t>(n2), false));

    const int cells = n1 * n2;
    std::vector<char> failed(static_cast<std::size_t>(cells), 0);
    auto run_cell = [&](int cell) {
        const int i = cell / n2;
        const int j = cell % n2;
        Angles at{spec.axis1.at(i), spec.axis2.at(j)};
        double sum = 0.0;
        double sum_sq = 0.0;
        try {
            for (int r = 0; r < spec.repeats; ++r) {
                double v = loss.evaluate(
                    at, mix_seed(spec.seed, static_cast<std::uint64_t>(cell) * spec.repeats + r));
                if (!std::isfinite(v)) {
                    throw Error("non-finite loss");
                }
                sum += v;
                sum_sq += v * v;
            }
        } catch (const std::exception &) {
            failed[static_cast<std::size_t>(cell)] = 1;
            return;
        }
        const double mean = sum / spec.repeats;
        grid.losses(i, j) = mean;
        if (spec.repeats > 1) {
            double var = (sum_sq - spec.repeats * mean * mean) / (spec.repeats - 1);
            grid.sigma(i, j) = std::sqrt(std::max(0.0, var));
        }
    };

    const int workers = std::max(1, std::min(threads, cells));
    if (workers == 1) {
        for (int c = 0; c < cells; ++c) {
            run_cell(c);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int c = next++; c < cells; c = next++) {
                    run_cell(c);
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    for (int c = 0; c < cells; ++c) {
        const int i = c / n2;
        const int j = c % n2;
        if (failed[static_cast<std::size_t>(c)]) {
            grid.missing[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
            continue;
        }
        if (grid.argmin1 < 0 || grid.losses(i, j) < grid.losses(grid.argmin1, grid.argmin2)) {
            grid.argmin1 = i;
            grid.argmin2 = j;
        }
    }
    return grid;
}

}  // namespace qwres
