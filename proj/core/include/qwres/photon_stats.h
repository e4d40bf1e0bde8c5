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

#ifndef QWRES_PHOTON_STATS_H
#define QWRES_PHOTON_STATS_H

#include <cstdint>
#include <utility>
#include <vector>

#include "qwres/jones_optics.h"
#include "qwres/linalg.h"

namespace qwres {

enum class FeatureMode {
    kUnconditional,  // raw detection probabilities, linear in rho
    kRenormalized,   // conditioned on detection, sums to one
};

struct FeatureVector {
    RVector values;
    FeatureMode mode = FeatureMode::kRenormalized;
};

/// Two-qubit density matrix in the (HH, HV, VH, VV) basis.
class TwoQubitState {
   public:
    /// Validates hermiticity, unit trace and positivity (std::invalid_argument otherwise).
    explicit TwoQubitState(const Matrix4c &rho);

    static TwoQubitState pure(const Vector4c &coefficients);
    static TwoQubitState product(const JonesVector &first, const JonesVector &second);

    const Matrix4c &rho() const { return rho_; }

   private:
    Matrix4c rho_;
};

struct CoherentInput {
    Complex alpha{1.0, 0.0};  // overall field amplitude, sqrt(photon rate) units
    JonesVector jones = JonesVector::horizontal();
};

/// Photodiode intensity error: relative_error * I / sqrt(n_samples * tau).
struct ClassicalNoise {
    double relative_error = 0.03;
    int n_samples = 10;
    double tau_seconds = 10.0;

    double sigma_fraction() const { return relative_error / std::sqrt(n_samples * tau_seconds); }
};

struct SamplingConfig {
    std::int64_t shots_per_setting = 3000;
    std::uint64_t seed = 0;
    ClassicalNoise classical;
};

/// Single photon: raw_m = |(T c)_m|^2.
FeatureVector single_photon_probs(const TransferMatrix &t, const JonesVector &c,
                                  FeatureMode mode = FeatureMode::kRenormalized);

/// Coherent light: I_m = |alpha|^2 |(T c)_m|^2.
RVector coherent_intensities(const TransferMatrix &t, const CoherentInput &input);

/// Unordered output pair {m <= n} and its probability.
struct CoincidenceOutcome {
    int m = 0;
    int n = 0;
    double probability = 0.0;
};

/// Two photons injected into a general device whose L x 4 transfer has columns (1H, 1V, 2H, 2V).
/// The outcome list enumerates m <= n in row-major order.
std::vector<CoincidenceOutcome> two_photon_coincidences(const CMatrix &t_full, const Vector4c &coefficients,
                                                        FeatureMode mode = FeatureMode::kRenormalized);

/// Joint OAM statistics of two independent lines: p_mn = tr[(mu_m (x) mu_n) rho].
FeatureVector factorized_coincidences(const TransferMatrix &t12, const TwoQubitState &state,
                                      FeatureMode mode = FeatureMode::kRenormalized);

/// Per-branch coherent features, combined as an outer product (row-major, length L^2).
/// kRenormalized normalizes each branch by its total transmitted intensity; kUnconditional
/// references each branch to its input power |alpha|^2.
FeatureVector coherent_two_branch_features(const CoherentInput &first, const CoherentInput &second,
                                           const TransferMatrix &t12,
                                           FeatureMode mode = FeatureMode::kRenormalized);

/// Normalizes a nonnegative intensity vector; throws DegenerateInput when it sums to zero.
RVector normalize_intensities(const RVector &intensities);

struct SampledCounts {
    std::vector<std::int64_t> counts;
    RVector frequencies;
    bool empty = false;  // no events recorded; frequencies are all zero
};

/// Independent Poisson counts with means shots * p_b.
/// Renormalized input: frequencies = counts / total. Unconditional input: frequencies =
/// counts / shots, i.e. heralded detection rates.
SampledCounts sample_counts(const FeatureVector &p, std::int64_t shots, Rng &rng);
SampledCounts sample_counts(const FeatureVector &p, const SamplingConfig &cfg);

/// Redraws each count from Poisson(count), as in Monte-Carlo uncertainty propagation.
std::vector<std::int64_t> poisson_resample(const std::vector<std::int64_t> &counts, Rng &rng);

/// Frequencies from counts using the same convention as sample_counts.
SampledCounts counts_to_frequencies(std::vector<std::int64_t> counts, FeatureMode mode, std::int64_t shots);

/// Adds N(0, sigma_fraction * I_m) to each entry, clamped at zero.
RVector classical_intensity_noise(const RVector &intensities, const ClassicalNoise &noise, Rng &rng);
RVector classical_intensity_noise(const RVector &intensities, const SamplingConfig &cfg);

}  // namespace qwres

#endif  // QWRES_PHOTON_STATS_H
