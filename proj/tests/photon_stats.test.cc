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

#include "gtest/gtest.h"

#include "oracles.h"
#include "qwres/errors.h"
#include "test_util.h"

using namespace qwres;
using qwres_test::test_rng;

namespace {

TransferMatrix raw_transfer(const CMatrix &entries) {
    TransferMatrix t;
    t.entries = entries;
    t.line_blocks = {entries};
    t.reg = OamRegister{0, static_cast<int>(entries.rows()) - 1};
    return t;
}

/// p_m = tr[mu_m rho] with mu_m = row_m^dag row_m.
RVector povm_probs(const CMatrix &t, const CMatrix &rho) {
    RVector p(t.rows());
    for (Eigen::Index m = 0; m < t.rows(); ++m) {
        CMatrix mu = t.row(m).adjoint() * t.row(m);
        p(m) = (mu * rho).trace().real();
    }
    return p;
}

TwoQubitState random_product(std::mt19937_64 &rng) {
    return TwoQubitState::product(qwres_test::random_jones(rng), qwres_test::random_jones(rng));
}

}  // namespace

TEST(photon_stats, single_photon_examples) {
    JonesVector c(1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0)));
    TransferMatrix id = raw_transfer(CMatrix::Identity(2, 2));
    for (auto mode : {FeatureMode::kUnconditional, FeatureMode::kRenormalized}) {
        RVector p = single_photon_probs(id, c, mode).values;
        ASSERT_NEAR(p(0), 0.5, 1e-15);
        ASSERT_NEAR(p(1), 0.5, 1e-15);
    }
    CMatrix half = CMatrix::Identity(2, 2);
    half.row(1).setZero();
    ASSERT_EQ(single_photon_probs(raw_transfer(half), c, FeatureMode::kUnconditional).values(1), 0.0);
    ASSERT_THROW(single_photon_probs(raw_transfer(CMatrix::Zero(3, 2)), c), DegenerateInput);
}

TEST(photon_stats, single_photon_matches_brute_force) {
    WalkSpec walk = WalkSpec::default_two_step();
    auto rng = test_rng(10);
    for (int k = 0; k < 100; ++k) {
        MeasurementSettings s = k == 0 ? MeasurementSettings(0, 0) : qwres_test::random_settings(rng);
        JonesVector c = k == 0 ? JonesVector::horizontal() : qwres_test::random_jones(rng);
        RVector p = single_photon_probs(effective_transfer(walk, s), c, FeatureMode::kUnconditional).values;
        auto expected = oracle::detection_probs(qwres_test::to_oracle(walk), s.theta(), s.phi(), c.h(), c.v(), -2, 2);
        for (int m = 0; m < 5; ++m) {
            ASSERT_NEAR(p(m), expected[static_cast<std::size_t>(m)], 1e-12);
        }
    }
}

TEST(photon_stats, coherent_intensity_examples) {
    auto rng = test_rng(11);
    TransferMatrix t = effective_transfer(qwres_test::random_walk(rng), qwres_test::random_settings(rng));
    JonesVector c = qwres_test::random_jones(rng);
    RVector raw = single_photon_probs(t, c, FeatureMode::kUnconditional).values;
    ASSERT_LT((coherent_intensities(t, {1.0, c}) - raw).cwiseAbs().maxCoeff(), 1e-15);
    RVector i3 = coherent_intensities(t, {3.0, c});
    ASSERT_LT((i3 - 9.0 * raw).cwiseAbs().maxCoeff(), 1e-14);
    ASSERT_LT((normalize_intensities(i3) - normalize_intensities(raw)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(photon_stats, coherent_quantum_equivalence) {
    auto rng = test_rng(12);
    std::uniform_real_distribution<double> amp(0.1, 100.0);
    std::uniform_real_distribution<double> phase(0, 2 * kPi);
    for (int k = 0; k < 1000; ++k) {
        TransferMatrix t = effective_transfer(qwres_test::random_walk(rng), qwres_test::random_settings(rng));
        JonesVector c = qwres_test::random_jones(rng);
        Complex alpha = std::polar(amp(rng), phase(rng));
        RVector lhs = normalize_intensities(coherent_intensities(t, {alpha, c}));
        RVector rhs = single_photon_probs(t, c, FeatureMode::kRenormalized).values;
        ASSERT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(photon_stats, unconditional_features_are_linear_in_rho) {
    auto rng = test_rng(13);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int k = 0; k < 200; ++k) {
        TransferMatrix t = effective_transfer(qwres_test::random_walk(rng), qwres_test::random_settings(rng));
        JonesVector a = qwres_test::random_jones(rng);
        JonesVector b = qwres_test::random_jones(rng);
        double lambda = unit(rng);
        RVector pa = single_photon_probs(t, a, FeatureMode::kUnconditional).values;
        RVector pb = single_photon_probs(t, b, FeatureMode::kUnconditional).values;
        CMatrix mixed = lambda * a.density() + (1 - lambda) * b.density();
        ASSERT_LT((povm_probs(t.entries, a.density()) - pa).cwiseAbs().maxCoeff(), 1e-12);
        ASSERT_LT((povm_probs(t.entries, mixed) - (lambda * pa + (1 - lambda) * pb)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(photon_stats, completeness_without_postselection) {
    // Keeping both PBS ports of a unitary walk: the two port distributions sum to one.
    auto rng = test_rng(14);
    for (int k = 0; k < 100; ++k) {
        WalkSpec walk = qwres_test::random_walk(rng);
        MeasurementSettings s = qwres_test::random_settings(rng);
        JonesVector c = qwres_test::random_jones(rng);
        Reservoir r(walk);
        Matrix2c proj = projection_matrix(s);
        Matrix2c swap;
        swap << 0, 1, 1, 0;
        CMatrix h_port = r.transfer_block(proj);
        CMatrix v_port = r.transfer_block(swap * proj);
        CMatrix full(10, 2);
        full << h_port, v_port;
        RVector p = single_photon_probs(raw_transfer(full), c, FeatureMode::kUnconditional).values;
        ASSERT_NEAR(p.sum(), 1.0, 1e-12);
    }
}

TEST(photon_stats, two_photon_examples) {
    // Photon 1 on modes {0, 1}, photon 2 on modes {2, 3}: no overlap.
    CMatrix t = CMatrix::Zero(4, 4);
    t(0, 0) = 1;
    t(1, 1) = 1;
    t(2, 2) = 1;
    t(3, 3) = 1;
    Vector4c hv(0, 1, 0, 0);  // |H>_1 |V>_2
    auto out = two_photon_coincidences(t, hv);
    double total = 0;
    for (const auto &o : out) {
        total += o.probability;
        if (o.m == 0 && o.n == 3) {
            ASSERT_NEAR(o.probability, 1.0, 1e-15);
        }
    }
    ASSERT_NEAR(total, 1.0, 1e-15);

    // 50:50 coupler on one polarization: Hong-Ou-Mandel bunching.
    const double r = 1 / std::sqrt(2.0);
    CMatrix bs = CMatrix::Zero(2, 4);
    bs(0, 0) = r;
    bs(1, 0) = r;
    bs(0, 2) = r;
    bs(1, 2) = -r;
    Vector4c hh(1, 0, 0, 0);
    auto hom = two_photon_coincidences(bs, hh, FeatureMode::kUnconditional);
    for (const auto &o : hom) {
        if (o.m != o.n) {
            ASSERT_NEAR(o.probability, 0.0, 1e-15);
        } else {
            ASSERT_NEAR(o.probability, 0.5, 1e-15);
        }
    }
}

TEST(photon_stats, two_photon_completeness_for_unitary_devices) {
    auto rng = test_rng(15);
    for (int k = 0; k < 50; ++k) {
        // A random 4x4 unitary acting on (1H, 1V, 2H, 2V) -> 4 output modes.
        Eigen::MatrixXcd a = oracle::random_hermitian(rng, 4);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
        CMatrix u = es.eigenvectors();
        Vector4c c;
        for (int j = 0; j < 4; ++j) {
            c(j) = oracle::random_qubit(rng)(0);
        }
        c /= c.norm();
        double total = 0;
        for (const auto &o : two_photon_coincidences(u, c, FeatureMode::kUnconditional)) {
            total += o.probability;
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(photon_stats, factorized_coincidences_examples) {
    auto rng = test_rng(16);
    WalkSpec w1 = qwres_test::random_walk(rng);
    WalkSpec w2 = qwres_test::random_walk(rng);
    auto s1 = qwres_test::random_settings(rng);
    auto s2 = qwres_test::random_settings(rng);
    TransferMatrix t1 = effective_transfer(w1, s1);
    TransferMatrix t2 = effective_transfer(w2, s2);
    TransferMatrix t12 = two_line_transfer(w1, s1, w2, s2);

    // Maximally mixed input.
    RVector mixed = factorized_coincidences(t12, TwoQubitState(Matrix4c::Identity() / 4.0),
                                            FeatureMode::kUnconditional)
                        .values;
    for (int m = 0; m < 5; ++m) {
        for (int n = 0; n < 5; ++n) {
            double expected = t1.entries.row(m).squaredNorm() * t2.entries.row(n).squaredNorm() / 4.0;
            ASSERT_NEAR(mixed(m * 5 + n), expected, 1e-12);
        }
    }

    // Psi- does not factorize.
    const double r = 1 / std::sqrt(2.0);
    RVector p = factorized_coincidences(t12, TwoQubitState::pure(Vector4c(0, r, -r, 0))).values;
    Eigen::MatrixXd joint = Eigen::Map<Eigen::MatrixXd>(p.data(), 5, 5).transpose();
    RVector marg1 = joint.rowwise().sum();
    RVector marg2 = joint.colwise().sum().transpose();
    ASSERT_GT((joint - marg1 * marg2.transpose()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(photon_stats, product_states_factorize) {
    auto rng = test_rng(17);
    for (int k = 0; k < 500; ++k) {
        WalkSpec w1 = qwres_test::random_walk(rng);
        WalkSpec w2 = qwres_test::random_walk(rng);
        auto s1 = qwres_test::random_settings(rng);
        auto s2 = qwres_test::random_settings(rng);
        JonesVector a = qwres_test::random_jones(rng);
        JonesVector b = qwres_test::random_jones(rng);
        TransferMatrix t12 = two_line_transfer(w1, s1, w2, s2);
        for (auto mode : {FeatureMode::kUnconditional, FeatureMode::kRenormalized}) {
            RVector joint = factorized_coincidences(t12, TwoQubitState::product(a, b), mode).values;
            RVector p1 = single_photon_probs(effective_transfer(w1, s1), a, mode).values;
            RVector p2 = single_photon_probs(effective_transfer(w2, s2), b, mode).values;
            for (int m = 0; m < 5; ++m) {
                for (int n = 0; n < 5; ++n) {
                    ASSERT_NEAR(joint(m * 5 + n), p1(m) * p2(n), 1e-12);
                }
            }
            RVector classical = coherent_two_branch_features({2.0, a}, {0.5, b}, t12, mode).values;
            ASSERT_LT((classical - joint).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(photon_stats, two_branch_features_sum_to_one) {
    auto rng = test_rng(18);
    TransferMatrix t12 = two_line_transfer(qwres_test::random_walk(rng), qwres_test::random_settings(rng),
                                           qwres_test::random_walk(rng), qwres_test::random_settings(rng));
    RVector f = coherent_two_branch_features({1.0, qwres_test::random_jones(rng)}, {1.0, qwres_test::random_jones(rng)},
                                             t12)
                    .values;
    ASSERT_NEAR(f.sum(), 1.0, 1e-12);
    ASSERT_GE(f.minCoeff(), 0.0);

    // Uniform branch distributions give a uniform joint distribution.
    CMatrix flat = CMatrix::Constant(5, 2, 0.0);
    flat.col(0).setConstant(1 / std::sqrt(5.0));
    TransferMatrix line = raw_transfer(flat);
    line.reg = OamRegister{};
    TransferMatrix uniform = combine_lines(line, line);
    RVector u = coherent_two_branch_features({1.0, JonesVector::horizontal()}, {1.0, JonesVector::horizontal()}, uniform)
                    .values;
    ASSERT_LT((u - RVector::Constant(25, 1.0 / 25)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(photon_stats, two_qubit_state_validation) {
    ASSERT_THROW(TwoQubitState(Matrix4c::Identity()), std::invalid_argument);
    Matrix4c bad = Matrix4c::Zero();
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    ASSERT_THROW(TwoQubitState{bad}, std::invalid_argument);
    Matrix4c nonherm = Matrix4c::Identity() / 4.0;
    nonherm(0, 1) = 0.1;
    ASSERT_THROW(TwoQubitState{nonherm}, std::invalid_argument);
}

TEST(photon_stats, sample_counts_examples) {
    FeatureVector delta{RVector::Unit(5, 0), FeatureMode::kRenormalized};
    Rng rng(1);
    SampledCounts s = sample_counts(delta, 1000, rng);
    ASSERT_GT(s.counts[0], 0);
    for (int b = 1; b < 5; ++b) {
        ASSERT_EQ(s.counts[static_cast<std::size_t>(b)], 0);
    }
    ASSERT_EQ(s.frequencies, delta.values);

    FeatureVector uniform{RVector::Constant(5, 0.2), FeatureMode::kRenormalized};
    SampledCounts big = sample_counts(uniform, SamplingConfig{1000000, 99, {}});
    double sigma = oracle::binomial_sigma(0.2, 1e6);
    for (int b = 0; b < 5; ++b) {
        ASSERT_NEAR(big.frequencies(b), 0.2, 5 * sigma);
    }

    SampledCounts again = sample_counts(uniform, SamplingConfig{1000000, 99, {}});
    ASSERT_EQ(again.counts, big.counts);

    SampledCounts none = sample_counts(FeatureVector{RVector::Zero(3), FeatureMode::kUnconditional}, 10, rng);
    ASSERT_TRUE(none.empty);
}

TEST(photon_stats, frequency_error_scales_as_inverse_root_n) {
    FeatureVector p{RVector(5), FeatureMode::kRenormalized};
    p.values << 0.1, 0.3, 0.25, 0.05, 0.3;
    std::vector<double> shots{1e3, 1e4, 1e5};
    std::vector<double> err;
    Rng rng(2024);
    for (double n : shots) {
        double total = 0;
        for (int trial = 0; trial < 100; ++trial) {
            total += (sample_counts(p, static_cast<std::int64_t>(n), rng).frequencies - p.values).cwiseAbs().maxCoeff();
        }
        err.push_back(total / 100);
    }
    ASSERT_NEAR(oracle::loglog_slope(shots, err), -0.5, 0.1);
}

TEST(photon_stats, classical_noise_examples) {
    RVector i = RVector::Constant(4, 1.0);
    ClassicalNoise off{0.0, 10, 10.0};
    Rng rng(3);
    ASSERT_EQ(classical_intensity_noise(i, off, rng), i);

    ClassicalNoise defaults;
    ASSERT_NEAR(defaults.sigma_fraction(), 0.003, 1e-15);
    const int draws = 100000;
    double sum = 0, sum_sq = 0;
    RVector one = RVector::Ones(1);
    for (int k = 0; k < draws; ++k) {
        double x = classical_intensity_noise(one, defaults, rng)(0);
        sum += x;
        sum_sq += x * x;
    }
    double mean = sum / draws;
    double sd = std::sqrt(sum_sq / draws - mean * mean);
    ASSERT_NEAR(sd, 0.003, 0.02 * 0.003);

    // Relative model: scaling the input by k scales the perturbation by k.
    Rng a(5);
    Rng b(5);
    RVector base = RVector::LinSpaced(4, 0.5, 2.0);
    RVector n1 = classical_intensity_noise(base, defaults, a) - base;
    RVector n7 = classical_intensity_noise(7.0 * base, defaults, b) - 7.0 * base;
    ASSERT_LT((n7 - 7.0 * n1).cwiseAbs().maxCoeff(), 1e-12);

    // Clamped at zero.
    ClassicalNoise huge{50.0, 1, 1.0};
    RVector clamped = classical_intensity_noise(RVector::Ones(1000), huge, rng);
    ASSERT_GE(clamped.minCoeff(), 0.0);
}

TEST(photon_stats, poisson_resample_is_seeded) {
    std::vector<std::int64_t> counts{0, 10, 1000};
    Rng a(7);
    Rng b(7);
    auto x = poisson_resample(counts, a);
    ASSERT_EQ(x, poisson_resample(counts, b));
    ASSERT_EQ(x[0], 0);
}
