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

#ifndef QWRES_QELM_H
#define QWRES_QELM_H

#include <optional>
#include <string>
#include <vector>

#include "qwres/linalg.h"
#include "qwres/photon_stats.h"

namespace qwres {

struct Observable {
    CMatrix matrix;
    std::string label;

    /// Throws std::invalid_argument unless `matrix` is square and Hermitian within 1e-12.
    Observable(CMatrix matrix, std::string label);
    int dim() const { return static_cast<int>(matrix.rows()); }
};

enum class BellState { kPsiPlus, kPsiMinus, kPhiPlus, kPhiMinus };

/// Pauli X, Y or Z in the (H, V) basis, H = |0>. Throws std::invalid_argument on other labels.
Observable pauli(char label);

/// Projector witness W_B = I/2 - |B><B|. Negative expectation certifies entanglement.
Observable bell_witness(BellState which);
Vector4c bell_vector(BellState which);
std::string to_string(BellState which);

Observable identity_observable(int dim);

/// Y(j, i) = tr[O_j rho_i].
RMatrix build_targets(const std::vector<Observable> &observables, const std::vector<CMatrix> &states);

/// Moore-Penrose pseudoinverse by SVD, zeroing singular values below rel_cutoff * sigma_max.
RMatrix pseudoinverse(const RMatrix &p, double rel_cutoff = 1e-12, int *rank = nullptr);

struct TrainOptions {
    double svd_cutoff = 1e-12;
    std::optional<double> ridge;  // lambda > 0 selects W = Y P^T (P P^T + lambda I)^-1
};

struct ReadoutMatrix {
    RMatrix w;
    double svd_cutoff = 1e-12;
    std::optional<double> ridge;
    int rank = 0;
    bool degenerate_features = false;  // rank(P) < number of outcomes
};

/// Readout from feature columns P (n_out x n_tr) and targets Y (n_obs x n_tr).
ReadoutMatrix train(const RMatrix &p, const RMatrix &y, const TrainOptions &options = {});

RVector predict(const ReadoutMatrix &w, const RVector &features);
RVector predict(const ReadoutMatrix &w, const FeatureVector &features);
/// Column-wise predictions for a feature matrix.
RMatrix predict(const ReadoutMatrix &w, const RMatrix &features);

/// Mean of squared entry differences.
double mse(const RMatrix &predictions, const RMatrix &targets);

}  // namespace qwres

#endif  // QWRES_QELM_H
