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

#include "qwres/experiments.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

#include "qwres/errors.h"

namespace qwres {

std::string to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::kHaarQubit:
            return "haar_qubit";
        case DatasetKind::kLocalRotationsHH:
            return "local_rotations_hh";
        case DatasetKind::kLocalRotationsPsiMinus:
            return "local_rotations_psi_minus";
    }
    return "?";
}

Matrix2c haar_unitary(Rng &rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Matrix2c z;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double re = gauss(rng);
            double im = gauss(rng);
            z(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Matrix2c> qr(z);
    Matrix2c q = qr.householderQ();
    Matrix2c r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k) {
        double mag = std::abs(r(k, k));
        Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0);
        q.col(k) *= phase;
    }
    return q;
}

std::vector<StateSample> generate_states(const DatasetSpec &spec) {
    if (spec.size < 1) {
        throw std::invalid_argument("generate_states: size must be >= 1");
    }
    Rng rng(spec.seed);
    std::vector<StateSample> out;
    out.reserve(static_cast<std::size_t>(spec.size));
    for (int i = 0; i < spec.size; ++i) {
        StateSample s;
        switch (spec.kind) {
            case DatasetKind::kHaarQubit: {
                Matrix2c u = haar_unitary(rng);
                JonesVector c(u.col(0));
                s.amplitudes = c.vector();
                s.factors = {c};
                break;
            }
            case DatasetKind::kLocalRotationsHH: {
                Matrix2c ua = haar_unitary(rng);
                Matrix2c ub = haar_unitary(rng);
                JonesVector a(ua.col(0));
                JonesVector b(ub.col(0));
                Vector4c c;
                c << a.h() * b.h(), a.h() * b.v(), a.v() * b.h(), a.v() * b.v();
                s.amplitudes = c;
                s.factors = {a, b};
                break;
            }
            case DatasetKind::kLocalRotationsPsiMinus: {
                Matrix2c ua = haar_unitary(rng);
                Matrix2c ub = haar_unitary(rng);
                Matrix4c u = Eigen::kroneckerProduct(ua, ub).eval();
                Vector4c c = u * bell_vector(BellState::kPsiMinus);
                s.amplitudes = c / c.norm();
                break;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

double concurrence(const Matrix4c &rho) {
    Matrix4c yy = Matrix4c::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    Matrix4c flipped = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
    Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix4c root = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    Matrix4c m = root * flipped * root;
    m = (0.5 * (m + m.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix4c> ms(m, Eigen::EigenvaluesOnly);
    Eigen::Vector4d lambda = ms.eigenvalues().cwiseMax(0.0).cwiseSqrt();  // ascending
    return std::max(0.0, lambda(3) - lambda(2) - lambda(1) - lambda(0));
}

MonteCarloResult monte_carlo_uncertainty(const std::function<std::map<std::string, double>(Rng &)> &pipeline,
                                         const MonteCarloConfig &cfg) {
    if (cfg.resamples < 2) {
        throw std::invalid_argument("monte_carlo_uncertainty: resamples must be >= 2");
    }
    MonteCarloResult result;
    result.resamples = cfg.resamples;
    std::map<std::string, std::vector<double>> values;
    for (int r = 0; r < cfg.resamples; ++r) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        try {
            for (const auto &[name, v] : pipeline(rng)) {
                values[name].push_back(v);
            }
        } catch (const std::exception &) {
            ++result.failures;
        }
    }
    for (const auto &[name, vs] : values) {
        MetricSummary s;
        s.samples = static_cast<int>(vs.size());
        double sum = 0.0;
        for (double v : vs) {
            sum += v;
        }
        s.mean = sum / s.samples;
        if (s.samples > 1) {
            double ss = 0.0;
            for (double v : vs) {
                ss += (v - s.mean) * (v - s.mean);
            }
            s.stddev = std::sqrt(ss / (s.samples - 1));
        }
        result.metrics[name] = s;
    }
    return result;
}

std::vector<int> default_curve_sizes() {
    std::vector<int> sizes;
    for (int n = 5; n <= 100; n += 5) {
        sizes.push_back(n);
    }
    return sizes;
}

double accuracy(const Confusion &confusion) {
    long total = confusion.total();
    if (total == 0) {
        return 0.0;
    }
    return static_cast<double>(confusion.counts[0][0] + confusion.counts[1][1]) / static_cast<double>(total);
}

namespace {

std::string curve_key(int n) { return "curve/" + std::to_string(n); }

std::vector<int> usable_sizes(const std::vector<int> &requested, int n_train) {
    std::set<int> sizes;
    for (int n : requested) {
        if (n >= 1 && n <= n_train) {
            sizes.insert(n);
        }
    }
    return {sizes.begin(), sizes.end()};
}

/// Readout fits and scores shared by both experiments.
std::map<std::string, double> score(const RMatrix &p_train, const RMatrix &y_train, const RMatrix &p_test,
                                    const RMatrix &y_test, const std::vector<int> &sizes, const TrainOptions &opts,
                                    ReadoutMatrix *full = nullptr) {
    std::map<std::string, double> metrics;
    for (int n : sizes) {
        ReadoutMatrix w = train(p_train.leftCols(n), y_train.leftCols(n), opts);
        metrics[curve_key(n)] = mse(predict(w, p_test), y_test);
    }
    ReadoutMatrix w = train(p_train, y_train, opts);
    metrics["train_mse"] = mse(predict(w, p_train), y_train);
    metrics["test_mse"] = mse(predict(w, p_test), y_test);
    if (full != nullptr) {
        *full = std::move(w);
    }
    return metrics;
}

RVector mode_features(const RVector &intensities, FeatureMode mode) {
    return mode == FeatureMode::kRenormalized ? normalize_intensities(intensities) : intensities;
}

/// Single-line or two-line features from per-branch intensities at unit power.
RVector branch_product(const std::vector<RVector> &branches, FeatureMode mode) {
    RVector f = mode_features(branches[0], mode);
    for (std::size_t b = 1; b < branches.size(); ++b) {
        RVector g = mode_features(branches[b], mode);
        RVector joint(f.size() * g.size());
        for (Eigen::Index m = 0; m < f.size(); ++m) {
            joint.segment(m * g.size(), g.size()) = f(m) * g;
        }
        f = std::move(joint);
    }
    return f;
}

/// Training side: measured intensities per state and branch.
struct ClassicalData {
    std::vector<std::vector<RVector>> intensities;

    RMatrix features(FeatureMode mode) const {
        RVector first = branch_product(intensities.front(), mode);
        RMatrix p(first.size(), static_cast<Eigen::Index>(intensities.size()));
        for (std::size_t i = 0; i < intensities.size(); ++i) {
            p.col(static_cast<Eigen::Index>(i)) = branch_product(intensities[i], mode);
        }
        return p;
    }

    ClassicalData redraw(const ClassicalNoise &noise, Rng &rng) const {
        ClassicalData out = *this;
        for (auto &branches : out.intensities) {
            for (auto &v : branches) {
                v = classical_intensity_noise(v, noise, rng);
            }
        }
        return out;
    }
};

/// Test side: exact features or recorded counts per state.
struct QuantumData {
    RMatrix exact;
    std::vector<std::vector<std::int64_t>> counts;
    std::int64_t shots = 0;

    RMatrix features(FeatureMode mode) const {
        if (counts.empty()) {
            return exact;
        }
        RMatrix p(exact.rows(), exact.cols());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            p.col(static_cast<Eigen::Index>(i)) = counts_to_frequencies(counts[i], mode, shots).frequencies;
        }
        return p;
    }

    QuantumData resample(Rng &rng) const {
        QuantumData out = *this;
        for (auto &c : out.counts) {
            c = poisson_resample(c, rng);
        }
        return out;
    }
};

QuantumData sample_quantum(const RMatrix &exact, FeatureMode mode, const NoiseConfig &noise, Rng &rng) {
    QuantumData data;
    data.exact = exact;
    if (!noise.enabled) {
        return data;
    }
    if (noise.shots < 1) {
        throw std::invalid_argument("noise.shots must be >= 1");
    }
    data.shots = noise.shots;
    for (Eigen::Index i = 0; i < exact.cols(); ++i) {
        FeatureVector p{exact.col(i), mode};
        data.counts.push_back(sample_counts(p, noise.shots, rng).counts);
    }
    return data;
}

void fill_report(ExperimentReport &report, const std::map<std::string, double> &metrics,
                 const std::vector<int> &sizes, const ReadoutMatrix &w, const RMatrix &p_train,
                 const RMatrix &y_train, const RMatrix &p_test, const RMatrix &y_test) {
    report.train_mse = metrics.at("train_mse");
    report.test_mse = metrics.at("test_mse");
    for (int n : sizes) {
        double sigma = 0.0;
        auto it = report.uncertainty.metrics.find(curve_key(n));
        if (it != report.uncertainty.metrics.end()) {
            sigma = it->second.stddev;
        }
        report.learning_curve.push_back({n, metrics.at(curve_key(n)), sigma});
    }
    report.readout_rank = w.rank;
    report.degenerate_features = w.degenerate_features;
    report.readout = w.w;
    RMatrix pred_train = predict(w, p_train);
    RMatrix pred_test = predict(w, p_test);
    for (std::size_t j = 0; j < report.observables.size(); ++j) {
        const auto r = static_cast<Eigen::Index>(j);
        for (Eigen::Index i = 0; i < y_train.cols(); ++i) {
            report.predictions.push_back({report.observables[j], y_train(r, i), pred_train(r, i), "train"});
        }
        for (Eigen::Index i = 0; i < y_test.cols(); ++i) {
            report.predictions.push_back({report.observables[j], y_test(r, i), pred_test(r, i), "test"});
        }
    }
}

std::vector<CMatrix> densities(const std::vector<StateSample> &states) {
    std::vector<CMatrix> out;
    for (const auto &s : states) {
        out.push_back(s.density());
    }
    return out;
}

}  // namespace

ExperimentReport pauli_transfer_experiment(const PauliExperimentConfig &cfg) {
    if (cfg.train.kind != DatasetKind::kHaarQubit || cfg.test.kind != DatasetKind::kHaarQubit) {
        throw std::invalid_argument("pauli_transfer_experiment expects single-qubit datasets");
    }
    if (cfg.observables.empty()) {
        throw std::invalid_argument("pauli_transfer_experiment: no observables");
    }
    const auto train_states = generate_states(cfg.train);
    const auto test_states = generate_states(cfg.test);
    const TransferMatrix t = Reservoir(cfg.walk).transfer(cfg.settings);

    ExperimentReport report;
    std::vector<Observable> obs;
    for (char c : cfg.observables) {
        obs.push_back(pauli(c));
        report.observables.push_back(obs.back().label);
    }
    const RMatrix y_train = build_targets(obs, densities(train_states));
    const RMatrix y_test = build_targets(obs, densities(test_states));

    Rng classical_rng(mix_seed(cfg.seed, 0));
    Rng quantum_rng(mix_seed(cfg.seed, 1));

    ClassicalData classical;
    for (const auto &s : train_states) {
        RVector intensities = coherent_intensities(t, {Complex(1.0), s.factors[0]});
        if (cfg.noise.enabled) {
            intensities = classical_intensity_noise(intensities, cfg.noise.classical, classical_rng);
        }
        classical.intensities.push_back({intensities});
    }
    RMatrix exact_test(t.modes(), static_cast<Eigen::Index>(test_states.size()));
    for (std::size_t i = 0; i < test_states.size(); ++i) {
        exact_test.col(static_cast<Eigen::Index>(i)) = single_photon_probs(t, test_states[i].factors[0], cfg.mode).values;
    }
    const QuantumData quantum = sample_quantum(exact_test, cfg.mode, cfg.noise, quantum_rng);

    const auto sizes = usable_sizes(cfg.curve_sizes, cfg.train.size);
    const RMatrix p_train = classical.features(cfg.mode);
    const RMatrix p_test = quantum.features(cfg.mode);
    ReadoutMatrix w;
    auto metrics = score(p_train, y_train, p_test, y_test, sizes, cfg.train_options, &w);

    if (cfg.with_uncertainty && cfg.noise.enabled) {
        report.uncertainty = monte_carlo_uncertainty(
            [&](Rng &rng) {
                ClassicalData c = classical.redraw(cfg.noise.classical, rng);
                QuantumData q = quantum.resample(rng);
                return score(c.features(cfg.mode), y_train, q.features(cfg.mode), y_test, sizes, cfg.train_options);
            },
            cfg.monte_carlo);
    }
    fill_report(report, metrics, sizes, w, p_train, y_train, p_test, y_test);
    return report;
}

WitnessExperimentConfig WitnessExperimentConfig::robustness_preset() {
    WitnessExperimentConfig cfg;
    cfg.train.size = 400;
    cfg.test.size = 56;
    return cfg;
}

ExperimentReport witness_transfer_experiment(const WitnessExperimentConfig &cfg) {
    if (cfg.train.kind != DatasetKind::kLocalRotationsHH) {
        throw std::invalid_argument("witness_transfer_experiment trains on product states");
    }
    if (cfg.test.kind == DatasetKind::kHaarQubit) {
        throw std::invalid_argument("witness_transfer_experiment tests on two-qubit states");
    }
    const auto train_states = generate_states(cfg.train);
    const auto test_states = generate_states(cfg.test);
    const TransferMatrix t12 = two_line_transfer(cfg.walk1, cfg.settings1, cfg.walk2, cfg.settings2);
    const TransferMatrix line1{t12.line_blocks[0], {t12.line_blocks[0]}, t12.reg};
    const TransferMatrix line2{t12.line_blocks[1], {t12.line_blocks[1]}, t12.reg};

    ExperimentReport report;
    const Observable witness = bell_witness(cfg.witness);
    report.observables = {witness.label};
    const RMatrix y_train = build_targets({witness}, densities(train_states));
    const RMatrix y_test = build_targets({witness}, densities(test_states));

    Rng classical_rng(mix_seed(cfg.seed, 0));
    Rng quantum_rng(mix_seed(cfg.seed, 1));

    ClassicalData classical;
    for (const auto &s : train_states) {
        RVector i1 = coherent_intensities(line1, {Complex(1.0), s.factors[0]});
        RVector i2 = coherent_intensities(line2, {Complex(1.0), s.factors[1]});
        if (cfg.noise.enabled) {
            i1 = classical_intensity_noise(i1, cfg.noise.classical, classical_rng);
            i2 = classical_intensity_noise(i2, cfg.noise.classical, classical_rng);
        }
        classical.intensities.push_back({i1, i2});
    }
    RMatrix exact_test(t12.modes(), static_cast<Eigen::Index>(test_states.size()));
    for (std::size_t i = 0; i < test_states.size(); ++i) {
        exact_test.col(static_cast<Eigen::Index>(i)) =
            factorized_coincidences(t12, TwoQubitState::pure(test_states[i].amplitudes), cfg.mode).values;
    }
    const QuantumData quantum = sample_quantum(exact_test, cfg.mode, cfg.noise, quantum_rng);

    const auto sizes = usable_sizes(cfg.curve_sizes, cfg.train.size);
    const RMatrix p_train = classical.features(cfg.mode);
    const RMatrix p_test = quantum.features(cfg.mode);
    ReadoutMatrix w;
    auto metrics = score(p_train, y_train, p_test, y_test, sizes, cfg.train_options, &w);

    if (cfg.with_uncertainty && cfg.noise.enabled) {
        report.uncertainty = monte_carlo_uncertainty(
            [&](Rng &rng) {
                ClassicalData c = classical.redraw(cfg.noise.classical, rng);
                QuantumData q = quantum.resample(rng);
                return score(c.features(cfg.mode), y_train, q.features(cfg.mode), y_test, sizes, cfg.train_options);
            },
            cfg.monte_carlo);
    }
    fill_report(report, metrics, sizes, w, p_train, y_train, p_test, y_test);

    const RMatrix pred = predict(w, p_test);
    Confusion confusion;
    for (Eigen::Index i = 0; i < y_test.cols(); ++i) {
        int truth = y_test(0, i) < 0.0 ? 0 : 1;
        int guess = pred(0, i) < 0.0 ? 0 : 1;
        ++confusion.counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(guess)];
    }
    report.confusion = confusion;
    return report;
}

RobustnessReport robustness_rerun(const WitnessExperimentConfig &base, const JitterSpec &jitter) {
    RobustnessReport out;
    out.base = witness_transfer_experiment(base);
    Rng rng(jitter.seed);
    out.perturbed_walk1 = jitter_walk(base.walk1, jitter.max_angle_offset_deg, jitter.max_delta_offset_rad, rng);
    out.perturbed_walk2 = jitter_walk(base.walk2, jitter.max_angle_offset_deg, jitter.max_delta_offset_rad, rng);
    WitnessExperimentConfig perturbed = base;
    perturbed.walk1 = out.perturbed_walk1;
    perturbed.walk2 = out.perturbed_walk2;
    if (jitter.fresh_datasets) {
        perturbed.train.seed = mix_seed(base.train.seed, 1);
        perturbed.test.seed = mix_seed(base.test.seed, 1);
        perturbed.seed = mix_seed(base.seed, 1);
        perturbed.monte_carlo.seed = mix_seed(base.monte_carlo.seed, 1);
    }
    out.perturbed = witness_transfer_experiment(perturbed);
    return out;
}

}  // namespace qwres
