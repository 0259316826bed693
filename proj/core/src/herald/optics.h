// Copyright 2026 The Herald Authors
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

#ifndef HERALD_OPTICS_H
#define HERALD_OPTICS_H

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "herald/hilbert.h"

namespace herald {

/// Two-mode beam splitter acting on creation operators as
///   a^dag -> cos(theta) a^dag + e^{i phi} sin(theta) b^dag
///   b^dag -> e^{-i phi} sin(theta) a^dag - cos(theta) b^dag.
/// The default is the symmetric 50:50 splitter a^dag -> (a^dag + b^dag)/sqrt2,
/// b^dag -> (a^dag - b^dag)/sqrt2, which is its own inverse.
struct BeamSplitter {
    std::size_t mode_a;
    std::size_t mode_b;
    double theta = std::numbers::pi / 4;
    double phi = 0.0;
};

/// |n> -> e^{i n phi} |n>.
struct PhaseShift {
    std::size_t mode;
    double phi;
};

/// Rotates the (H, V) pair of one spatial port: H^dag -> cos H^dag + sin V^dag,
/// V^dag -> -sin H^dag + cos V^dag. theta = pi/2 turns H into V.
struct PolarizationRotation {
    std::size_t h_mode;
    std::size_t v_mode;
    double theta;
};

struct PolarizationPort {
    std::size_t h_mode;
    std::size_t v_mode;
};

/// Transmits H and reflects V: output port A carries (A.H, B.V) and output
/// port B carries (B.H, A.V), reusing the input mode indices. Pure relabeling.
struct PolarizingBeamSplitter {
    PolarizationPort port_a;
    PolarizationPort port_b;
};

using OpticalElement = std::variant<BeamSplitter, PhaseShift, PolarizationRotation, PolarizingBeamSplitter>;

std::vector<Subsystem> element_targets(const OpticalElement &element);

/// Fock-space matrix of the element on its target modes (first target most
/// significant). Columns whose image leaves the cutoff are zero and reported
/// in `overflow_columns` when non-null.
Matrix fock_operator(
    const OpticalElement &element, unsigned fock_cutoff, std::vector<std::size_t> *overflow_columns = nullptr);

/// Throws CutoffOverflowError if the input populates a Fock state whose image
/// does not fit under the cutoff.
PureState apply_element(const PureState &state, const OpticalElement &element);
DensityOperator apply_element(const DensityOperator &rho, const OpticalElement &element);

PureState apply_pbs(const PureState &state, PolarizationPort a, PolarizationPort b);
DensityOperator apply_pbs(const DensityOperator &rho, PolarizationPort a, PolarizationPort b);

/// Threshold (non-number-resolving) photodetector.
struct DetectorModel {
    double efficiency = 1.0;
    double dark_count_prob = 0.0;
    static constexpr bool number_resolving = false;

    void validate() const;
    /// (1 - efficiency)^n (1 - dark_count_prob).
    double no_click_probability(unsigned photons) const;
};

struct ClickRecord {
    std::size_t detector_id;
    bool clicked;
    bool operator==(const ClickRecord &) const = default;
};

inline constexpr const char *kClick = "click";
inline constexpr const char *kNoClick = "no-click";

/// Outcomes "click" / "no-click" with Kraus operators
/// sqrt(w(n)) |0><n| for each photon number n: the detector absorbs the mode.
Instrument threshold_detector_instrument(const SubsystemLayout &layout, std::size_t mode, const DetectorModel &detector);

std::vector<Outcome<DensityOperator>> measure_threshold(
    const DensityOperator &rho, std::size_t mode, const DetectorModel &detector);
std::vector<Outcome<DensityOperator>> measure_threshold(
    const PureState &state, std::size_t mode, const DetectorModel &detector);

/// Beam-splitter-to-environment loss, Kraus
/// K_k = sum_n sqrt(C(n,k) t^{n-k} (1-t)^k) |n-k><n|.
Instrument loss_instrument(const SubsystemLayout &layout, std::size_t mode, double transmissivity);
DensityOperator apply_loss(const DensityOperator &rho, std::size_t mode, double transmissivity);
DensityOperator apply_loss(const PureState &state, std::size_t mode, double transmissivity);

/// Partial which-path erasure on a mode pair. Coherences between different
/// occupation patterns (n_a, n_b) are scaled by sqrt(visibility), the
/// wavepacket amplitude overlap: rho -> o rho + (1 - o) sum_k P_k rho P_k.
Instrument which_path_dephasing_instrument(
    const SubsystemLayout &layout, std::size_t mode_a, std::size_t mode_b, double visibility);
DensityOperator dephase_by_visibility(
    const DensityOperator &rho, std::size_t mode_a, std::size_t mode_b, double visibility);
DensityOperator dephase_by_visibility(const PureState &state, std::size_t mode_a, std::size_t mode_b, double visibility);

/// Projective check of the total photon number in `modes`: outcome "present"
/// when it equals `expected`, "absent" otherwise.
Instrument photon_count_instrument(const SubsystemLayout &layout, std::vector<std::size_t> modes, unsigned expected);

}  // namespace herald

#endif
