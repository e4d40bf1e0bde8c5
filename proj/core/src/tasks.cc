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

#include "qwres/tasks.h"

#include <numeric>

#include "qwres/errors.h"

namespace qwres {

namespace {

RVector branch_features(const RVector &intensities, FeatureMode mode) {
    // Intensities are at unit input power, so the unconditional reference |alpha|^2 is 1.
    return mode == FeatureMode::kRenormalized ? normalize_intensities(intensities) : intensities;
}

RVector acquire(const CMatrix &block, const JonesVector &c, const ClassicalNoise *noise, Rng *rng) {
    RVector intensities = (block * c.vector()).cwiseAbs2();
    if (noise != nullptr) {
        if (rng == nullptr) {
            throw std::invalid_argument("classical noise requested without a random generator");
        }
        intensities = classical_intensity_noise(intensities, *noise, *rng);
    }
    return intensities;
}

std::vector<JonesVector> pick(const std::vector<JonesVector> &all, const std::vector<int> &idx) {
    std::vector<JonesVector> out;
    out.reserve(idx.size());
    for (int i : idx) {
        out.push_back(all[static_cast<std::size_t>(i)]);
    }
    return out;
}

RMatrix pick_columns(const RMatrix &m, const std::vector<int> &idx) {
    RMatrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
    }
    return out;
}

}  // namespace

RMatrix coherent_feature_matrix(const TransferMatrix &t, const std::vector<JonesVector> &states, FeatureMode mode,
                                const ClassicalNoise *noise, Rng *rng) {
    if (t.lines() != 1) {
        throw DimensionMismatch("coherent_feature_matrix expects a single-line transfer matrix");
    }
    RMatrix p(t.modes(), static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        p.col(static_cast<Eigen::Index>(i)) = branch_features(acquire(t.entries, states[i], noise, rng), mode);
    }
    return p;
}

RMatrix coherent_pair_feature_matrix(const TransferMatrix &t12, const std::vector<ProductPair> &states,
                                     FeatureMode mode, const ClassicalNoise *noise, Rng *rng) {
    if (t12.lines() != 2) {
        throw DimensionMismatch("coherent_pair_feature_matrix expects a two-line transfer matrix");
    }
    const Eigen::Index l1 = t12.line_blocks[0].rows();
    const Eigen::Index l2 = t12.line_blocks[1].rows();
    RMatrix p(l1 * l2, static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        RVector f1 = branch_features(acquire(t12.line_blocks[0], states[i].first, noise, rng), mode);
        RVector f2 = branch_features(acquire(t12.line_blocks[1], states[i].second, noise, rng), mode);
        for (Eigen::Index m = 0; m < l1; ++m) {
            p.col(static_cast<Eigen::Index>(i)).segment(m * l2, l2) = f1(m) * f2;
        }
    }
    return p;
}

std::vector<int> sample_minibatch(int n, int size, Rng &rng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    if (size <= 0 || size >= n) {
        return idx;
    }
    for (int k = 0; k < size; ++k) {
        std::uniform_int_distribution<int> pick_one(k, n - 1);
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick_one(rng))]);
    }
    idx.resize(static_cast<std::size_t>(size));
    return idx;
}

CMatrix product_density(const ProductPair &pair) {
    Vector4c c;
    c << pair.first.h() * pair.second.h(), pair.first.h() * pair.second.v(), pair.first.v() * pair.second.h(),
        pair.first.v() * pair.second.v();
    return c * c.adjoint();
}

PauliTaskLoss::PauliTaskLoss(PauliTaskSpec spec) : spec_(std::move(spec)), reservoir_(spec_.walk) {
    if (spec_.states.empty()) {
        throw std::invalid_argument("PauliTaskLoss: empty state set");
    }
    if (spec_.observables.empty()) {
        throw std::invalid_argument("PauliTaskLoss: no observables");
    }
    std::vector<CMatrix> rhos;
    for (const auto &s : spec_.states) {
        rhos.push_back(s.density());
    }
    targets_ = build_targets(spec_.observables, rhos);
}

bool PauliTaskLoss::noiseless() const {
    return !spec_.noise &&
           (spec_.minibatch_size <= 0 || spec_.minibatch_size >= static_cast<int>(spec_.states.size()));
}

double PauliTaskLoss::evaluate(const Angles &angles, std::uint64_t seed) const {
    if (angles.size() != 2) {
        throw DimensionMismatch("PauliTaskLoss expects (theta, phi)");
    }
    Rng rng(seed);
    std::vector<int> batch = sample_minibatch(static_cast<int>(spec_.states.size()), spec_.minibatch_size, rng);
    TransferMatrix t = reservoir_.transfer(MeasurementSettings(angles[0], angles[1], 0.0));
    RMatrix p = coherent_feature_matrix(t, pick(spec_.states, batch), spec_.mode,
                                        spec_.noise ? &*spec_.noise : nullptr, &rng);
    RMatrix y = pick_columns(targets_, batch);
    ReadoutMatrix w = train(p, y, spec_.train);
    return mse(predict(w, p), y);
}

WitnessTaskLoss::WitnessTaskLoss(WitnessTaskSpec spec)
    : spec_(std::move(spec)), line1_(spec_.walk1), line2_(spec_.walk2) {
    if (spec_.states.empty()) {
        throw std::invalid_argument("WitnessTaskLoss: empty state set");
    }
    std::vector<CMatrix> rhos;
    for (const auto &s : spec_.states) {
        rhos.push_back(product_density(s));
    }
    targets_ = build_targets({spec_.witness}, rhos);
}

bool WitnessTaskLoss::noiseless() const {
    return !spec_.noise &&
           (spec_.minibatch_size <= 0 || spec_.minibatch_size >= static_cast<int>(spec_.states.size()));
}

double WitnessTaskLoss::evaluate(const Angles &angles, std::uint64_t seed) const {
    if (angles.size() != 2) {
        throw DimensionMismatch("WitnessTaskLoss expects (theta1, theta2)");
    }
    Rng rng(seed);
    std::vector<int> batch = sample_minibatch(static_cast<int>(spec_.states.size()), spec_.minibatch_size, rng);
    TransferMatrix t1 = line1_.transfer(MeasurementSettings(angles[0], spec_.phi1_deg, 0.0));
    TransferMatrix t2 = line2_.transfer(MeasurementSettings(angles[1], spec_.phi2_deg, 0.0));
    TransferMatrix t12 = combine_lines(t1, t2);
    std::vector<ProductPair> chosen;
    for (int i : batch) {
        chosen.push_back(spec_.states[static_cast<std::size_t>(i)]);
    }
    RMatrix p = coherent_pair_feature_matrix(t12, chosen, spec_.mode, spec_.noise ? &*spec_.noise : nullptr, &rng);
    RMatrix y = pick_columns(targets_, batch);
    ReadoutMatrix w = train(p, y, spec_.train);
    return mse(predict(w, p), y);
}

}  // namespace qwres
