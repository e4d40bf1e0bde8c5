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

#include "qwres/photon_stats.h"

#include <cmath>
#include <stdexcept>

#include "qwres/errors.h"

namespace qwres {

namespace {

constexpr double kDegenerateTotal = 1e-14;

FeatureVector finish(RVector raw, FeatureMode mode) {
    if (mode == FeatureMode::kRenormalized) {
        double total = raw.sum();
        if (total < kDegenerateTotal) {
            throw DegenerateInput("detection probability vanishes; renormalized features undefined");
        }
        raw /= total;
    }
    return {std::move(raw), mode};
}

void require_single_line(const TransferMatrix &t) {
    if (t.entries.cols() != 2) {
        throw DimensionMismatch("expected a single-line L x 2 transfer matrix");
    }
}

}  // namespace

TwoQubitState::TwoQubitState(const Matrix4c &rho) : rho_(rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("TwoQubitState: density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-12) {
        throw std::invalid_argument("TwoQubitState: trace differs from one");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("TwoQubitState: density matrix is not positive semidefinite");
    }
}

TwoQubitState TwoQubitState::pure(const Vector4c &coefficients) {
    double norm = coefficients.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("TwoQubitState: zero state vector");
    }
    Vector4c c = coefficients / norm;
    Matrix4c rho = c * c.adjoint();
    // Exact hermiticity; the outer product is Hermitian only up to rounding.
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return TwoQubitState(rho);
}

TwoQubitState TwoQubitState::product(const JonesVector &first, const JonesVector &second) {
    Vector4c c;
    c << first.h() * second.h(), first.h() * second.v(), first.v() * second.h(), first.v() * second.v();
    return pure(c);
}

FeatureVector single_photon_probs(const TransferMatrix &t, const JonesVector &c, FeatureMode mode) {
    require_single_line(t);
    RVector raw = (t.entries * c.vector()).cwiseAbs2();
    return finish(std::move(raw), mode);
}

RVector coherent_intensities(const TransferMatrix &t, const CoherentInput &input) {
    require_single_line(t);
    CVector out = input.alpha * (t.entries * input.jones.vector());
    return out.cwiseAbs2();
}

std::vector<CoincidenceOutcome> two_photon_coincidences(const CMatrix &t_full, const Vector4c &coefficients,
                                                        FeatureMode mode) {
    if (t_full.cols() != 4) {
        throw DimensionMismatch("two_photon_coincidences expects an L x 4 transfer (1H, 1V, 2H, 2V)");
    }
    const Eigen::Index modes = t_full.rows();
    // A(m, n) = sum_{mu nu} c_{mu nu} U_{m,1mu} U_{n,2nu}
    auto amplitude = [&](Eigen::Index m, Eigen::Index n) {
        Complex a = 0.0;
        for (int mu = 0; mu < 2; ++mu) {
            for (int nu = 0; nu < 2; ++nu) {
                a += coefficients(2 * mu + nu) * t_full(m, mu) * t_full(n, 2 + nu);
            }
        }
        return a;
    };
    std::vector<CoincidenceOutcome> outcomes;
    RVector raw(modes * (modes + 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index m = 0; m < modes; ++m) {
        for (Eigen::Index n = m; n < modes; ++n, ++k) {
            if (m == n) {
                raw(k) = 2.0 * std::norm(amplitude(m, m));
            } else {
                raw(k) = std::norm(amplitude(m, n) + amplitude(n, m));
            }
            outcomes.push_back({static_cast<int>(m), static_cast<int>(n), 0.0});
        }
    }
    RVector p = finish(std::move(raw), mode).values;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        outcomes[i].probability = p(static_cast<Eigen::Index>(i));
    }
    return outcomes;
}

FeatureVector factorized_coincidences(const TransferMatrix &t12, const TwoQubitState &state, FeatureMode mode) {
    if (t12.entries.cols() != 4 || t12.lines() != 2) {
        throw DimensionMismatch("factorized_coincidences expects a two-line transfer matrix");
    }
    // Row (m, n) of T12 is t1_m (x) t2_n, so tr[(mu_m (x) mu_n) rho] = (T12 rho T12^dag)_{(mn),(mn)}.
    CMatrix tr = t12.entries * state.rho();
    RVector raw(t12.entries.rows());
    for (Eigen::Index r = 0; r < raw.size(); ++r) {
        raw(r) = std::max(0.0, (tr.row(r) * t12.entries.row(r).adjoint())(0, 0).real());
    }
    return finish(std::move(raw), mode);
}

RVector normalize_intensities(const RVector &intensities) {
    double total = intensities.sum();
    if (!(total > 0.0)) {
        throw DegenerateInput("total intensity vanishes");
    }
    return intensities / total;
}

FeatureVector coherent_two_branch_features(const CoherentInput &first, const CoherentInput &second,
                                           const TransferMatrix &t12, FeatureMode mode) {
    if (t12.lines() != 2) {
        throw DimensionMismatch("coherent_two_branch_features expects a two-line transfer matrix");
    }
    TransferMatrix line1{t12.line_blocks[0], {t12.line_blocks[0]}, t12.reg};
    TransferMatrix line2{t12.line_blocks[1], {t12.line_blocks[1]}, t12.reg};
    RVector i1 = coherent_intensities(line1, first);
    RVector i2 = coherent_intensities(line2, second);
    if (mode == FeatureMode::kRenormalized) {
        i1 = normalize_intensities(i1);
        i2 = normalize_intensities(i2);
    } else {
        i1 /= std::norm(first.alpha);
        i2 /= std::norm(second.alpha);
    }
    RVector joint(i1.size() * i2.size());
    for (Eigen::Index m = 0; m < i1.size(); ++m) {
        joint.segment(m * i2.size(), i2.size()) = i1(m) * i2;
    }
    return {std::move(joint), mode};
}

SampledCounts counts_to_frequencies(std::vector<std::int64_t> counts, FeatureMode mode, std::int64_t shots) {
    SampledCounts out;
    out.frequencies = RVector::Zero(static_cast<Eigen::Index>(counts.size()));
    std::int64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    out.empty = total == 0;
    if (!out.empty) {
        double denominator = mode == FeatureMode::kRenormalized ? static_cast<double>(total)
                                                                : static_cast<double>(shots);
        for (std::size_t b = 0; b < counts.size(); ++b) {
            out.frequencies(static_cast<Eigen::Index>(b)) = static_cast<double>(counts[b]) / denominator;
        }
    }
    out.counts = std::move(counts);
    return out;
}

SampledCounts sample_counts(const FeatureVector &p, std::int64_t shots, Rng &rng) {
    if (shots < 1) {
        throw std::invalid_argument("sample_counts: shots must be >= 1");
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(p.values.size()));
    for (Eigen::Index b = 0; b < p.values.size(); ++b) {
        double mean = static_cast<double>(shots) * std::max(0.0, p.values(b));
        if (mean > 0.0) {
            std::poisson_distribution<std::int64_t> poisson(mean);
            counts[static_cast<std::size_t>(b)] = poisson(rng);
        }
    }
    return counts_to_frequencies(std::move(counts), p.mode, shots);
}

SampledCounts sample_counts(const FeatureVector &p, const SamplingConfig &cfg) {
    Rng rng(cfg.seed);
    return sample_counts(p, cfg.shots_per_setting, rng);
}

std::vector<std::int64_t> poisson_resample(const std::vector<std::int64_t> &counts, Rng &rng) {
    std::vector<std::int64_t> out(counts.size(), 0);
    for (std::size_t b = 0; b < counts.size(); ++b) {
        if (counts[b] > 0) {
            std::poisson_distribution<std::int64_t> poisson(static_cast<double>(counts[b]));
            out[b] = poisson(rng);
        }
    }
    return out;
}

RVector classical_intensity_noise(const RVector &intensities, const ClassicalNoise &noise, Rng &rng) {
    RVector out = intensities;
    const double fraction = noise.sigma_fraction();
    if (!(fraction > 0.0)) {
        return out;
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index m = 0; m < out.size(); ++m) {
        double draw = gauss(rng);
        out(m) = std::max(0.0, intensities(m) + fraction * intensities(m) * draw);
    }
    return out;
}

RVector classical_intensity_noise(const RVector &intensities, const SamplingConfig &cfg) {
    Rng rng(cfg.seed);
    return classical_intensity_noise(intensities, cfg.classical, rng);
}

}  // namespace qwres
