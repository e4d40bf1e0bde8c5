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

#ifndef QWRES_JONES_OPTICS_H
#define QWRES_JONES_OPTICS_H

#include <string>
#include <vector>

#include "qwres/linalg.h"

// Jones calculus and the quantum-walk reservoir.
//
// The walker lives on polarization (x) OAM. Basis vectors are ordered OAM-major:
//     index(m, pol) = 2 * (m - m_min) + pol,   pol = 0 (H) or 1 (V),
// so a waveplate acts as the block-diagonal kron(I_L, J).

namespace qwres {

/// Normalized polarization amplitudes (c_H, c_V).
class JonesVector {
   public:
    /// Normalizes the input; throws std::invalid_argument for the zero vector.
    JonesVector(Complex h, Complex v);
    explicit JonesVector(const Vector2c &c) : JonesVector(c(0), c(1)) {}

    static JonesVector horizontal() { return {1.0, 0.0}; }
    static JonesVector vertical() { return {0.0, 1.0}; }

    Complex h() const { return amplitudes_(0); }
    Complex v() const { return amplitudes_(1); }
    const Vector2c &vector() const { return amplitudes_; }
    Matrix2c density() const { return amplitudes_ * amplitudes_.adjoint(); }

   private:
    Vector2c amplitudes_;
};

struct OamRegister {
    int m_min = -2;
    int m_max = 2;

    int size() const { return m_max - m_min + 1; }
    bool contains(int m) const { return m >= m_min && m <= m_max; }
    int offset(int m) const { return m - m_min; }
    /// Row/column of |pol, m> in the 2L-dimensional walker space.
    int index(int m, int pol) const { return 2 * (m - m_min) + pol; }
    bool operator==(const OamRegister &) const = default;
};

/// Inclusive range of OAM values that may carry amplitude.
struct OamSupport {
    int lo = 0;
    int hi = 0;
};

enum class ElementKind { kHalfWave, kQuarterWave, kQPlate };

struct OpticalElement {
    ElementKind kind = ElementKind::kHalfWave;
    double angle_deg = 0.0;  // waveplates: fast-axis angle
    int twice_charge = 1;    // q-plates: 2q (q is a half-integer)
    double delta_rad = 0.0;  // q-plates: optical retardation

    static OpticalElement hwp(double angle_deg) { return {ElementKind::kHalfWave, angle_deg, 1, 0.0}; }
    static OpticalElement qwp(double angle_deg) { return {ElementKind::kQuarterWave, angle_deg, 1, 0.0}; }
    static OpticalElement qplate(double q, double delta_rad);

    double charge() const { return twice_charge / 2.0; }
    bool operator==(const OpticalElement &) const = default;
};

struct WalkSpec {
    std::vector<OpticalElement> elements;  // applied first to last
    OamRegister reg;
    bool allow_truncation = false;

    /// Two coin + q-plate steps spreading m = 0 over m in [-2, 2]:
    ///   HWP(22.5), QWP(45), QP(q=1/2, delta=pi/2), HWP(22.5), QWP(0), QP(q=1/2, delta=pi).
    static WalkSpec default_two_step();
    bool operator==(const WalkSpec &) const = default;
};

/// Rounds to the nearest multiple of `step`, half away from zero. step <= 0 disables snapping.
double snap_to_grid(double angle_deg, double step);

/// Projection-stage angles (HWP theta, QWP phi), stored on the angle grid.
class MeasurementSettings {
   public:
    MeasurementSettings() = default;
    MeasurementSettings(double theta_deg, double phi_deg, double grid_step_deg = 0.1);

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    double grid_step() const { return grid_step_; }
    bool operator==(const MeasurementSettings &) const = default;

   private:
    double theta_ = 0.0;
    double phi_ = 0.0;
    double grid_step_ = 0.1;
};

/// Post-selected amplitude map from input polarization to output OAM modes.
///
/// Single line: entries is L x 2, entries(m, mu) = <H, m| P U |mu, 0>.
/// Two lines: entries is L^2 x 4 = kron(block_1, block_2); row (m, n) -> m * L + n,
/// column (mu, nu) -> 2 * mu + nu, matching the (HH, HV, VH, VV) state basis.
struct TransferMatrix {
    CMatrix entries;
    std::vector<CMatrix> line_blocks;  // one L x 2 block per walk line
    OamRegister reg;

    int lines() const { return static_cast<int>(line_blocks.size()); }
    int modes() const { return static_cast<int>(entries.rows()); }
};

Matrix2c hwp_matrix(double theta_deg);
Matrix2c qwp_matrix(double phi_deg);

/// Measurement projection: HWP(theta) applied first, then QWP(phi).
Matrix2c projection_matrix(const MeasurementSettings &settings);

/// kron(I_L, jones): a polarization element acting on every OAM mode.
CMatrix embed_polarization(const Matrix2c &jones, const OamRegister &reg);

/// Tuned q-plate on polarization (x) OAM. In the circular basis
///   |L, m> -> cos(d/2) |L, m> + i sin(d/2) |R, m + 2q>
///   |R, m> -> cos(d/2) |R, m> + i sin(d/2) |L, m - 2q>
/// with |L> = (|H> + i|V>)/sqrt2, |R> = (|H> - i|V>)/sqrt2.
///
/// `populated` bounds the modes that can carry amplitude. If any of them would shift outside
/// the register, TruncationError is thrown unless `allow_truncation`, in which case the
/// outgoing amplitude is dropped. Edge states that can never be populated are left invariant.
CMatrix qplate_matrix(int twice_charge, double delta_rad, const OamRegister &reg, const OamSupport &populated,
                      bool allow_truncation = false);
/// Same, with every register mode considered populated.
CMatrix qplate_matrix(int twice_charge, double delta_rad, const OamRegister &reg, bool allow_truncation = false);

/// Matrix of a single element on the 2L space.
CMatrix element_matrix(const OpticalElement &element, const OamRegister &reg, const OamSupport &populated,
                       bool allow_truncation);

/// Composite walk unitary for an input injected at m = 0.
CMatrix build_walk(const WalkSpec &spec);

/// Fixed walk with the projection stage left free; reuses the walk unitary across settings.
class Reservoir {
   public:
    explicit Reservoir(WalkSpec spec);

    const WalkSpec &spec() const { return spec_; }
    const CMatrix &walk() const { return walk_; }
    TransferMatrix transfer(const MeasurementSettings &settings) const;
    /// Single-line L x 2 block for an arbitrary projection matrix.
    CMatrix transfer_block(const Matrix2c &projection) const;

   private:
    WalkSpec spec_;
    CMatrix walk_;
    CMatrix injected_;  // 2L x 2: columns U |H,0>, U |V,0>
};

TransferMatrix effective_transfer(const WalkSpec &spec, const MeasurementSettings &settings);
TransferMatrix two_line_transfer(const WalkSpec &spec1, const MeasurementSettings &settings1,
                                 const WalkSpec &spec2, const MeasurementSettings &settings2);
/// Kronecker combination of two single-line transfer matrices.
TransferMatrix combine_lines(const TransferMatrix &line1, const TransferMatrix &line2);

/// Copy of `spec` with each waveplate angle offset by U(-max_offset_deg, max_offset_deg) and each
/// q-plate retardation offset by U(-max_delta_rad, max_delta_rad).
WalkSpec jitter_walk(const WalkSpec &spec, double max_offset_deg, double max_delta_rad, Rng &rng);

std::string to_string(ElementKind kind);

}  // namespace qwres

#endif  // QWRES_JONES_OPTICS_H
