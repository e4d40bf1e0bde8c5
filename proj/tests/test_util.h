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

#ifndef QWRES_TESTS_TEST_UTIL_H
#define QWRES_TESTS_TEST_UTIL_H

#include <random>
#include <vector>

#include "oracles.h"
#include "qwres/jones_optics.h"

namespace qwres_test {

inline std::mt19937_64 test_rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5EEDu + salt); }

inline std::vector<oracle::Element> to_oracle(const qwres::WalkSpec &spec) {
    std::vector<oracle::Element> out;
    for (const auto &e : spec.elements) {
        switch (e.kind) {
            case qwres::ElementKind::kHalfWave:
                out.push_back({'h', e.angle_deg, 0, 0});
                break;
            case qwres::ElementKind::kQuarterWave:
                out.push_back({'q', e.angle_deg, 0, 0});
                break;
            case qwres::ElementKind::kQPlate:
                out.push_back({'p', 0, e.twice_charge, e.delta_rad});
                break;
        }
    }
    return out;
}

/// Two coin + q-plate steps (q = 1/2) with random coin angles and retardations.
inline qwres::WalkSpec random_walk(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0.0, 180.0);
    std::uniform_real_distribution<double> delta(0.0, 2 * oracle::pi);
    qwres::WalkSpec spec;
    for (int step = 0; step < 2; ++step) {
        spec.elements.push_back(qwres::OpticalElement::hwp(angle(rng)));
        spec.elements.push_back(qwres::OpticalElement::qwp(angle(rng)));
        spec.elements.push_back(qwres::OpticalElement::qplate(0.5, delta(rng)));
    }
    return spec;
}

inline qwres::MeasurementSettings random_settings(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0.0, 180.0);
    return {angle(rng), angle(rng)};
}

inline qwres::JonesVector random_jones(std::mt19937_64 &rng) { return qwres::JonesVector(oracle::random_qubit(rng)); }

}  // namespace qwres_test

#endif  // QWRES_TESTS_TEST_UTIL_H
