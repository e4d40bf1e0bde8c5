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

#include "qwres/jones_optics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwres/errors.h"

namespace qwres {

JonesVector::JonesVector(Complex h, Complex v) {
    double norm = std::sqrt(std::norm(h) + std::norm(v));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("JonesVector: amplitudes must be finite and not both zero");
    }
    amplitudes_ << h / norm, v / norm;
}

OpticalElement OpticalElement::qplate(double q, double delta_rad) {
    double twice = 2.0 * q;
    if (std::abs(twice - std::round(twice)) > 1e-12) {
        throw std::invalid_argument("q-plate charge must be a half-integer");
    }
    return {ElementKind::kQPlate, 0.0, static_cast<int>(std::lround(twice)), delta_rad};
}

WalkSpec WalkSpec::default_two_step() {
    WalkSpec spec;
    spec.elements = {
        OpticalElement::hwp(22.5), OpticalElement::qwp(45.0), OpticalElement::qplate(0.5, kPi / 2),
        OpticalElement::hwp(22.5), OpticalElement::qwp(0.0),  OpticalElement::qplate(0.5, kPi),
    };
    return spec;
}

double snap_to_grid(double angle_deg, double step) {
    if (!(step > 0.0)) {
        return angle_deg;
    }
    // std::round rounds half away from zero.
    return std::round(angle_deg / step) * step;
}

MeasurementSettings::MeasurementSettings(double theta_deg, double phi_deg, double grid_step_deg)
    : theta_(snap_to_grid(theta_deg, grid_step_deg)),
      phi_(snap_to_grid(phi_deg, grid_step_deg)),
      grid_step_(grid_step_deg) {}

Matrix2c hwp_matrix(double theta_deg) {
    double t = 2.0 * deg_to_rad(theta_deg);
    Matrix2c m;
    m << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
    return m;
}

Matrix2c qwp_matrix(double phi_deg) {
    double p = deg_to_rad(phi_deg);
    double c = std::cos(p);
    double s = std::sin(p);
    const Complex i(0.0, 1.0);
    Matrix2c m;
    m << c * c + i * s * s, (1.0 - i) * s * c,  //
        (1.0 - i) * s * c, s * s + i * c * c;
    return m;
}

Matrix2c projection_matrix(const MeasurementSettings &settings) {
    return qwp_matrix(settings.phi()) * hwp_matrix(settings.theta());
}

CMatrix embed_polarization(const Matrix2c &jones, const OamRegister &reg) {
    int n = 2 * reg.size();
    CMatrix out = CMatrix::Zero(n, n);
    for (int k = 0; k < reg.size(); ++k) {
        out.block<2, 2>(2 * k, 2 * k) = jones;
    }
    return out;
}

namespace {

// Columns are |L>, |R> expressed in the (H, V) basis.
Matrix2c circular_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    Matrix2c c;
    c << r, r, i * r, -i * r;
    return c;
}

void check_register(const OamRegister &reg) {
    if (reg.m_max < reg.m_min) {
        throw std::invalid_argument("OamRegister: m_max < m_min");
    }
}

}  // namespace

CMatrix qplate_matrix(int twice_charge, double delta_rad, const OamRegister &reg, const OamSupport &populated,
                      bool allow_truncation) {
    check_register(reg);
    const int n = 2 * reg.size();
    const double c = std::cos(delta_rad / 2.0);
    const double s = std::sin(delta_rad / 2.0);
    const Complex is(0.0, s);
    const bool couples = std::abs(s) > 1e-15;

    if (couples && !allow_truncation) {
        int lo = std::max(populated.lo, reg.m_min);
        int hi = std::min(populated.hi, reg.m_max);
        if (!reg.contains(hi + std::abs(twice_charge)) || !reg.contains(lo - std::abs(twice_charge))) {
            throw TruncationError("q-plate shifts populated OAM modes [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "] outside the register [" + std::to_string(reg.m_min) +
                                  ", " + std::to_string(reg.m_max) + "]");
        }
    }

    // Build in the circular basis (pol 0 = L, pol 1 = R), then rotate to (H, V).
    CMatrix lr = CMatrix::Zero(n, n);
    const int shift = twice_charge;
    for (int m = reg.m_min; m <= reg.m_max; ++m) {
        const int l_in = reg.index(m, 0);
        const int r_in = reg.index(m, 1);
        if (!couples) {
            lr(l_in, l_in) = c;
            lr(r_in, r_in) = c;
            continue;
        }
        if (reg.contains(m + shift)) {
            lr(l_in, l_in) = c;
            lr(reg.index(m + shift, 1), l_in) = is;
        } else {
            lr(l_in, l_in) = allow_truncation ? Complex(c) : Complex(1.0);
        }
        if (reg.contains(m - shift)) {
            lr(r_in, r_in) = c;
            lr(reg.index(m - shift, 0), r_in) = is;
        } else {
            lr(r_in, r_in) = allow_truncation ? Complex(c) : Complex(1.0);
        }
    }
    CMatrix basis = embed_polarization(circular_basis(), reg);
    return basis * lr * basis.adjoint();
}

CMatrix qplate_matrix(int twice_charge, double delta_rad, const OamRegister &reg, bool allow_truncation) {
    return qplate_matrix(twice_charge, delta_rad, reg, OamSupport{reg.m_min, reg.m_max}, allow_truncation);
}

CMatrix element_matrix(const OpticalElement &element, const OamRegister &reg, const OamSupport &populated,
                       bool allow_truncation) {
    switch (element.kind) {
        case ElementKind::kHalfWave:
            return embed_polarization(hwp_matrix(element.angle_deg), reg);
        case ElementKind::kQuarterWave:
            return embed_polarization(qwp_matrix(element.angle_deg), reg);
        case ElementKind::kQPlate:
            return qplate_matrix(element.twice_charge, element.delta_rad, reg, populated, allow_truncation);
    }
    throw std::logic_error("unknown element kind");
}

CMatrix build_walk(const WalkSpec &spec) {
    check_register(spec.reg);
    if (!spec.reg.contains(0)) {
        throw std::invalid_argument("OamRegister must contain the injection mode m = 0");
    }
    const int n = 2 * spec.reg.size();
    CMatrix u = CMatrix::Identity(n, n);
    OamSupport support{0, 0};
    for (const auto &element : spec.elements) {
        u = element_matrix(element, spec.reg, support, spec.allow_truncation) * u;
        if (element.kind == ElementKind::kQPlate && std::abs(std::sin(element.delta_rad / 2.0)) > 1e-15) {
            int reach = std::abs(element.twice_charge);
            support.lo = std::max(spec.reg.m_min, support.lo - reach);
            support.hi = std::min(spec.reg.m_max, support.hi + reach);
        }
    }
    return u;
}

Reservoir::Reservoir(WalkSpec spec) : spec_(std::move(spec)), walk_(build_walk(spec_)) {
    injected_.resize(walk_.rows(), 2);
    injected_.col(0) = walk_.col(spec_.reg.index(0, 0));
    injected_.col(1) = walk_.col(spec_.reg.index(0, 1));
}

CMatrix Reservoir::transfer_block(const Matrix2c &projection) const {
    const int modes = spec_.reg.size();
    CMatrix block(modes, 2);
    // Only the H output row of the projection survives the PBS.
    const Complex p_h = projection(0, 0);
    const Complex p_v = projection(0, 1);
    for (int k = 0; k < modes; ++k) {
        block.row(k) = p_h * injected_.row(2 * k) + p_v * injected_.row(2 * k + 1);
    }
    return block;
}

TransferMatrix Reservoir::transfer(const MeasurementSettings &settings) const {
    TransferMatrix t;
    t.entries = transfer_block(projection_matrix(settings));
    t.line_blocks = {t.entries};
    t.reg = spec_.reg;
    return t;
}

TransferMatrix effective_transfer(const WalkSpec &spec, const MeasurementSettings &settings) {
    return Reservoir(spec).transfer(settings);
}

TransferMatrix combine_lines(const TransferMatrix &line1, const TransferMatrix &line2) {
    if (line1.lines() != 1 || line2.lines() != 1) {
        throw DimensionMismatch("combine_lines expects two single-line transfer matrices");
    }
    const CMatrix &a = line1.entries;
    const CMatrix &b = line2.entries;
    TransferMatrix t;
    t.entries.resize(a.rows() * b.rows(), 4);
    for (Eigen::Index m = 0; m < a.rows(); ++m) {
        for (Eigen::Index n = 0; n < b.rows(); ++n) {
            for (int mu = 0; mu < 2; ++mu) {
                for (int nu = 0; nu < 2; ++nu) {
                    t.entries(m * b.rows() + n, 2 * mu + nu) = a(m, mu) * b(n, nu);
                }
            }
        }
    }
    t.line_blocks = {a, b};
    t.reg = line1.reg;
    return t;
}

TransferMatrix two_line_transfer(const WalkSpec &spec1, const MeasurementSettings &settings1,
                                 const WalkSpec &spec2, const MeasurementSettings &settings2) {
    return combine_lines(effective_transfer(spec1, settings1), effective_transfer(spec2, settings2));
}

WalkSpec jitter_walk(const WalkSpec &spec, double max_offset_deg, double max_delta_rad, Rng &rng) {
    WalkSpec out = spec;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto &element : out.elements) {
        double draw = unit(rng);
        if (element.kind == ElementKind::kQPlate) {
            element.delta_rad += max_delta_rad * draw;
        } else {
            element.angle_deg += max_offset_deg * draw;
        }
    }
    return out;
}

std::string to_string(ElementKind kind) {
    switch (kind) {
        case ElementKind::kHalfWave:
            return "hwp";
        case ElementKind::kQuarterWave:
            return "qwp";
        case ElementKind::kQPlate:
            return "qplate";
    }
    return "?";
}

}  // namespace qwres
