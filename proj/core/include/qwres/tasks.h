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

#ifndef QWRES_TASKS_H
#define QWRES_TASKS_H

#include <optional>
#include <utility>
#include <vector>

#include "qwres/jones_optics.h"
#include "qwres/photon_stats.h"
#include "qwres/qelm.h"
#include "qwres/reservoir_opt.h"

// Feature acquisition shared by the experiments and the optimizer losses.

namespace qwres {

using ProductPair = std::pair<JonesVector, JonesVector>;

/// One column per state: coherent intensities at unit power, optionally perturbed by the
/// classical intensity noise (drawn in column order from `rng`), then mode-normalized.
RMatrix coherent_feature_matrix(const TransferMatrix &t, const std::vector<JonesVector> &states, FeatureMode mode,
                                const ClassicalNoise *noise = nullptr, Rng *rng = nullptr);

/// Two-branch analogue: each branch is perturbed and normalized separately, then combined by outer product.
RMatrix coherent_pair_feature_matrix(const TransferMatrix &t12, const std::vector<ProductPair> &states,
                                     FeatureMode mode, const ClassicalNoise *noise = nullptr, Rng *rng = nullptr);

/// Draws `size` distinct indices out of [0, n) (all of them, in order, when size <= 0 or size >= n).
std::vector<int> sample_minibatch(int n, int size, Rng &rng);

struct PauliTaskSpec {
    WalkSpec walk = WalkSpec::default_two_step();
    std::vector<JonesVector> states;
    std::vector<Observable> observables;
    FeatureMode mode = FeatureMode::kRenormalized;
    std::optional<ClassicalNoise> noise;  // empty: exact intensities
    int minibatch_size = 0;               // 0: every state on every evaluation
    TrainOptions train;
};

/// Training-set MSE of the readout fitted at projection angles (theta, phi) on one walk line.
class PauliTaskLoss : public LossEvaluator {
   public:
    explicit PauliTaskLoss(PauliTaskSpec spec);

    std::vector<std::string> coordinate_names() const override { return {"theta", "phi"}; }
    double evaluate(const Angles &angles, std::uint64_t seed) const override;
    bool noiseless() const override;

    const PauliTaskSpec &spec() const { return spec_; }

   private:
    PauliTaskSpec spec_;
    Reservoir reservoir_;
    RMatrix targets_;
};

struct WitnessTaskSpec {
    WalkSpec walk1 = WalkSpec::default_two_step();
    WalkSpec walk2 = WalkSpec::default_two_step();
    std::vector<ProductPair> states;
    Observable witness = bell_witness(BellState::kPsiPlus);
    double phi1_deg = 0.0;  // projection QWPs stay fixed
    double phi2_deg = 0.0;
    FeatureMode mode = FeatureMode::kRenormalized;
    std::optional<ClassicalNoise> noise;
    int minibatch_size = 0;
    TrainOptions train;
};

/// Training-set MSE of the two-line witness readout at HWP angles (theta1, theta2).
class WitnessTaskLoss : public LossEvaluator {
   public:
    explicit WitnessTaskLoss(WitnessTaskSpec spec);

    std::vector<std::string> coordinate_names() const override { return {"theta1", "theta2"}; }
    double evaluate(const Angles &angles, std::uint64_t seed) const override;
    bool noiseless() const override;

    const WitnessTaskSpec &spec() const { return spec_; }

   private:
    WitnessTaskSpec spec_;
    Reservoir line1_;
    Reservoir line2_;
    RMatrix targets_;
};

CMatrix product_density(const ProductPair &pair);

}  // namespace qwres

#endif  // QWRES_TASKS_H
