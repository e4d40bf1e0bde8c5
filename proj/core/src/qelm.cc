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

#include "qwres/qelm.h"

#include <cmath>
#include <stdexcept>

#include "qwres/errors.h"

namespace qwres {

Observable::Observable(CMatrix m, std::string l) : matrix(std::move(m)), label(std::move(l)) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw std::invalid_argument("Observable: matrix must be square");
    }
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("Observable: matrix is not Hermitian");
    }
}

Observable pauli(char label) {
    const Complex i(0.0, 1.0);
    Matrix2c m;
    switch (label) {
        case 'X':
        case 'x':
            m << 0.0, 1.0, 1.0, 0.0;
            return {m, "X"};
        case 'Y':
        case 'y':
            m << 0.0, -i, i, 0.0;
            return {m, "Y"};
        case 'Z':
        case 'z':
            m << 1.0, 0.0, 0.0, -1.0;
            return {m, "Z"};
        default:
            throw std::invalid_argument(std::string("pauli: unknown label '") + label + "'");
    }
}

Vector4c bell_vector(BellState which) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector4c b = Vector4c::Zero();
    switch (which) {
        case BellState::kPsiPlus:
            b(1) = r;
            b(2) = r;
            break;
        case BellState::kPsiMinus:
            b(1) = r;
            b(2) = -r;
            break;
        case BellState::kPhiPlus:
            b(0) = r;
            b(3) = r;
            break;
        case BellState::kPhiMinus:
            b(0) = r;
            b(3) = -r;
            break;
    }
    return b;
}

std::string to_string(BellState which) {
    switch (which) {
        case BellState::kPsiPlus:
            return "psi+";
        case BellState::kPsiMinus:
            return "psi-";
        case BellState::kPhiPlus:
            return "phi+";
        case BellState::kPhiMinus:
            return "phi-";
    }
    return "?";
}

Observable bell_witness(BellState which) {
    Vector4c b = bell_vector(which);
    CMatrix w = 0.5 * CMatrix::Identity(4, 4) - b * b.adjoint();
    w = (0.5 * (w + w.adjoint())).eval();
    return {w, "W_" + to_string(which)};
}

Observable identity_observable(int dim) { return {CMatrix::Identity(dim, dim), "I"}; }

RMatrix build_targets(const std::vector<Observable> &observables, const std::vector<CMatrix> &states) {
    RMatrix y(observables.size(), states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < observables.size(); ++j) {
            const CMatrix &o = observables[j].matrix;
            if (o.rows() != states[i].rows() || states[i].rows() != states[i].cols()) {
                throw DimensionMismatch("build_targets: observable " + observables[j].label +
                                        " does not match state dimension");
            }
            Complex value = (o * states[i]).trace();
            if (std::abs(value.imag()) >= 1e-10) {
                throw std::domain_error("build_targets: expectation value has an imaginary part");
            }
            y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value.real();
        }
    }
    return y;
}

RMatrix pseudoinverse(const RMatrix &p, double rel_cutoff, int *rank) {
    if (p.size() == 0) {
        if (rank) {
            *rank = 0;
        }
        return RMatrix::Zero(p.cols(), p.rows());
    }
    Eigen::JacobiSVD<RMatrix> svd(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector &s = svd.singularValues();
    const double threshold = rel_cutoff * s(0);
    RVector inv = RVector::Zero(s.size());
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) > threshold && s(k) > 0.0) {
            inv(k) = 1.0 / s(k);
            ++r;
        }
    }
    if (rank) {
        *rank = r;
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ReadoutMatrix train(const RMatrix &p, const RMatrix &y, const TrainOptions &options) {
    if (p.cols() < 1) {
        throw std::invalid_argument("train: feature matrix has no columns");
    }
    if (p.cols() != y.cols()) {
        throw DimensionMismatch("train: P and Y have different numbers of training columns");
    }
    if (!(options.svd_cutoff > 0.0 && options.svd_cutoff < 1.0)) {
        throw std::invalid_argument("train: svd_cutoff must lie in (0, 1)");
    }
    ReadoutMatrix out;
    out.svd_cutoff = options.svd_cutoff;
    out.ridge = options.ridge;
    RMatrix p_pinv = pseudoinverse(p, options.svd_cutoff, &out.rank);
    if (options.ridge) {
        if (!(*options.ridge > 0.0)) {
            throw std::invalid_argument("train: ridge must be positive");
        }
        RMatrix gram = p * p.transpose();
        gram.diagonal().array() += *options.ridge;
        // W = Y P^T G^-1, solved as G W^T = P Y^T (G is symmetric).
        out.w = gram.ldlt().solve(p * y.transpose()).transpose();
    } else {
        out.w = y * p_pinv;
    }
    out.degenerate_features = out.rank < p.rows();
    return out;
}

RVector predict(const ReadoutMatrix &w, const RVector &features) {
    if (features.size() != w.w.cols()) {
        throw DimensionMismatch("predict: feature length does not match the readout");
    }
    return w.w * features;
}

RVector predict(const ReadoutMatrix &w, const FeatureVector &features) { return predict(w, features.values); }

RMatrix predict(const ReadoutMatrix &w, const RMatrix &features) {
    if (features.rows() != w.w.cols()) {
        throw DimensionMismatch("predict: feature length does not match the readout");
    }
    return w.w * features;
}

double mse(const RMatrix &predictions, const RMatrix &targets) {
    if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
        throw DimensionMismatch("mse: shape mismatch");
    }
    if (predictions.size() == 0) {
        return 0.0;
    }
    return (predictions - targets).array().square().mean();
}

}  // namespace qwres
