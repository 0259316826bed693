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

#ifndef HERALD_PROTOCOLS_H
#define HERALD_PROTOCOLS_H

#include <array>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herald/emitters.h"
#include "herald/hilbert.h"
#include "herald/optics.h"
#include "herald/pauli_frame.h"

namespace herald {

/// mu |up> + nu |down> for one emitter.
struct QubitPrep {
    Complex up = 1.0 / std::numbers::sqrt2;
    Complex down = 1.0 / std::numbers::sqrt2;

    static QubitPrep symmetric() { return {}; }
    void validate() const;
};

/// Click pattern of one heralding round. Accepting iff exactly one detector
/// clicked; detector 0 clicking signals the symmetric combination (+1).
struct HeraldSignature {
    int round = 1;
    std::vector<bool> clicks;

    bool accepting() const;
    int sign() const;
    std::string to_string() const;
    bool operator==(const HeraldSignature &) const = default;
};

/// Pairs of physical qubits forming encoded qubits with
/// |0~> = |down, up> and |1~> = |up, down> on (first, second).
struct CompositeQubitMap {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    void validate() const;
};

enum class PhotonEncoding { TimeBin, DualRail, Polarization };

std::string_view to_string(PhotonEncoding encoding);
PhotonEncoding parse_encoding(std::string_view text);

/// A photonic logical qubit: |0> is one photon in `zero_mode`, |1> one photon
/// in `one_mode` (E/L, rail 0/rail 1 or H/V).
struct PhotonicQubit {
    std::size_t zero_mode;
    std::size_t one_mode;
};

/// Target N-photon state sum_k alpha_k |P_k>; bit j of k (most significant
/// first) is the logical value of photon j.
struct MultiPhotonSpec {
    std::size_t photons = 1;
    std::vector<Complex> amplitudes = {1.0, 0.0};
    PhotonEncoding encoding = PhotonEncoding::Polarization;

    void validate() const;
    /// (|0...0> + |1...1>)/sqrt2 on N photons.
    static MultiPhotonSpec ghz(std::size_t photons, PhotonEncoding encoding);
};

// ---------------------------------------------------------------------------
// Branch engine

enum class BranchStatus { Running, Success, Failure };

/// One pure trajectory through a protocol.
struct Branch {
    PureState state;
    std::vector<HeraldSignature> heralds;
    std::vector<bool> pending_clicks;
    std::vector<bool> readout;  // matter-qubit results, true = |down>
    PauliFrame frame;
    BranchStatus status = BranchStatus::Running;
    std::string note;
    std::vector<std::string> trail;  // instrument outcome labels in order
};

struct Child {
    double probability;  // conditional on the parent
    Branch branch;
};

struct Step {
    std::string name;
    std::function<std::vector<Child>(const Branch &)> expand;
};

struct Protocol {
    std::string id;
    Branch initial;
    std::vector<Step> steps;
    std::vector<PhotonicQubit> photons;
    /// Ideal state a successful branch should match once its frame is applied.
    std::function<PureState(const Branch &)> target;

    /// Frame-corrected fidelity of a finished branch to its target.
    double fidelity(const Branch &leaf) const;
};

/// Advances one branch through one step. Finished branches pass through.
std::vector<Child> expand_step(const Step &step, const Branch &branch);
/// Marks a branch that ran through every step as successful.
Branch finish(Branch branch);

struct ProtocolResult {
    bool success = false;
    PureState post_state;
    std::vector<HeraldSignature> herald_history;
    PauliFrame frame;
    double probability = 0.0;
    std::vector<bool> readout;
    std::string note;
    double fidelity = 0.0;  // frame-corrected, successful leaves only
};

/// Exhaustive enumeration of every leaf.
std::vector<ProtocolResult> run_branches(const Protocol &protocol);
double success_probability(const std::vector<ProtocolResult> &leaves);
/// Probability-weighted mean fidelity over successful leaves (0 if none).
double success_fidelity(const std::vector<ProtocolResult> &leaves);

/// Applies recorded corrections: X/Z gates on matter qubits; on photons X
/// swaps the two modes and Z is a pi phase on the |1> mode.
PureState apply_frame(const PureState &state, const PauliFrame &frame, std::span<const PhotonicQubit> photons = {});

// ---------------------------------------------------------------------------
// Step builders

Step unitary_step(std::string name, Matrix u, std::vector<Subsystem> targets);
Step element_step(std::string name, OpticalElement element);
Step emit_step(EmitterQubit emitter, double emission_probability);
Step dephase_step(std::size_t mode_a, std::size_t mode_b, double visibility);
Step detect_step(std::size_t mode, const DetectorModel &detector);
/// Converts pending clicks into a signature; a rejecting signature fails the
/// branch, a -1 sign toggles Z on `sign_target`.
Step herald_step(int round, FrameTarget sign_target);
/// Measures qubit `q` in the computational basis and removes it.
Step measure_and_discard_step(std::size_t q);
/// Fails the branch unless `modes` hold exactly `expected` photons.
Step presence_step(std::vector<std::size_t> modes, unsigned expected, std::string note);

// ---------------------------------------------------------------------------
// Double heralding

struct HeraldParams {
    DetectorModel detector;
    double emission_probability = 1.0;
    double visibility = 1.0;

    void validate() const;
};

/// Two emitters (qubits 0, 1) feeding modes 0, 1 of a symmetric 50:50 splitter.
SubsystemLayout herald_layout();

/// One round: pi-pulses, which-path dephasing, 50:50 splitter, threshold
/// detection of both outputs. Rejecting signatures end as failed leaves.
Protocol herald_round_protocol(const PureState &two_qubits, const HeraldParams &params);

struct SignatureOutcome {
    HeraldSignature signature;
    Outcome<DensityOperator> outcome;  // two-qubit conditional state
};

/// All signatures of one round with their probabilities and qubit states.
std::vector<SignatureOutcome> herald_round(const PureState &two_qubits, const HeraldParams &params);

/// Weight f of the entangled component in the single-click state produced
/// from the symmetric preparation, by exact enumeration.
double first_round_mixture_weight(double efficiency);

/// Round one, bit flips, round two, restoring bit flips. Succeeds on two
/// accepting signatures with (mu1 nu2 |ud> + s nu1 mu2 |du>) normalized,
/// s the product of the round signs, recorded as Z on qubit 0.
Protocol double_herald_protocol(std::array<QubitPrep, 2> preps, const HeraldParams &params);
std::vector<ProtocolResult> double_herald_entangle(std::array<QubitPrep, 2> preps, const HeraldParams &params);

// ---------------------------------------------------------------------------
// Matter-photon entanglement

/// One emitter, modes E (0) and L (1): mu|u>+nu|d> -> nu|u>|E> + mu|d>|L>.
Protocol hetero_timebin_protocol(QubitPrep prep, double emission_probability = 1.0);
std::vector<ProtocolResult> hetero_timebin(QubitPrep prep, double emission_probability = 1.0);

/// Layout of the polarization variant: qubits 0, 1; modes A_H, A_V, B_H, B_V.
SubsystemLayout hetero_polarization_layout();
inline constexpr PolarizationPort kPortA{0, 1};
inline constexpr PolarizationPort kPortB{2, 3};

/// a0 |0~> + a1 |1~>  ->  a0 |0~>|H> + a1 |1~>|V> in output port A.
Protocol hetero_polarization_protocol(std::array<Complex, 2> encoded, double emission_probability = 1.0);
std::vector<ProtocolResult> hetero_polarization(std::array<Complex, 2> encoded, double emission_probability = 1.0);

/// Hadamard and computational readout of physical qubit `measured`, which
/// is removed. Outcome |down> records Z on the remaining matter qubit.
std::vector<Step> reduce_composite_steps(std::size_t measured);
Protocol reduce_composite_protocol(const PureState &hetero_state, std::size_t measured);
std::vector<ProtocolResult> reduce_composite(const PureState &hetero_state, std::size_t measured);

// ---------------------------------------------------------------------------
// Entangled light

struct GenerationParams {
    double emission_probability = 1.0;
    /// Probability that each photon survives to its detector.
    double efficiency = 1.0;

    void validate() const;
};

/// N matter qubits, two pulses with a global bit flip in between, then
/// Hadamards and readout. Photon j uses modes (2j: E, 2j+1: L). The target
/// amplitude of photon string P is the input amplitude of the complement
/// of P.
Protocol timebin_generation_protocol(const PureState &matter, const GenerationParams &params = {});

/// 2N matter qubits, qubit pair (2j, 2j+1) encoding photon j. Dual rail uses
/// modes (2j, 2j+1); polarization uses ports A_j = (4j, 4j+1), B_j = (4j+2,
/// 4j+3) merged by a rotation and a PBS into A_j.
Protocol dualrail_generation_protocol(
    const PureState &matter, PhotonEncoding encoding, const GenerationParams &params = {});

/// (|ud> + |du>)/sqrt2 -> (|E,L> + |L,E>)/sqrt2 after frame correction.
Protocol photon_pair_timebin_protocol(const GenerationParams &params = {});
std::vector<ProtocolResult> photon_pair_timebin(const GenerationParams &params = {});

/// |uddu> + |duud>  ->  |H,V> + |V,H> (or the dual-rail equivalent).
Protocol photon_pair_dualrail_protocol(PhotonEncoding encoding, const GenerationParams &params = {});
std::vector<ProtocolResult> photon_pair_dualrail(PhotonEncoding encoding, const GenerationParams &params = {});

/// Matter preparation realizing `spec`: sum_k alpha_k |S_k> (2N qubits) for
/// dual rail / polarization, sum_k alpha_k |not P_k> (N qubits) for time bin.
PureState multiphoton_matter_state(const MultiPhotonSpec &spec);
Protocol multiphoton_protocol(const MultiPhotonSpec &spec, const GenerationParams &params = {});
std::vector<ProtocolResult> multiphoton_generate(const MultiPhotonSpec &spec, const GenerationParams &params = {});
std::vector<ProtocolResult> timebin_multiphoton_generate(
    const MultiPhotonSpec &spec, const GenerationParams &params = {});

/// Target photonic state sum_k alpha_k |P_k> on a photon-only layout.
PureState photonic_target(
    const SubsystemLayout &layout, std::span<const PhotonicQubit> photons, std::span<const Complex> amplitudes);
/// Logical amplitudes of a photonic state (one photon per logical qubit).
std::vector<Complex> logical_amplitudes(const PureState &state, std::span<const PhotonicQubit> photons);

// ---------------------------------------------------------------------------
// Registry

enum class ProtocolKind {
    HeraldRound,
    DoubleHerald,
    HeteroTimeBin,
    HeteroPolarization,
    ReduceComposite,
    TimeBinPair,
    DualRailPair,
    MultiPhoton,
    TimeBinMultiPhoton,
};

std::string_view protocol_name(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);
std::vector<ProtocolKind> all_protocols();
/// Step-by-step description with the inputs the protocol reads.
std::string describe(ProtocolKind kind);

struct ProtocolParams {
    DetectorModel detector;
    std::optional<CavityParams> cavity;
    /// Relative slow-rate mismatch between the two heralding cavities.
    double mismatch = 0.0;
    std::array<QubitPrep, 2> preps = {QubitPrep::symmetric(), QubitPrep::symmetric()};
    std::array<Complex, 2> encoded = {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
    std::size_t reduce_qubit = 1;
    MultiPhotonSpec multiphoton = MultiPhotonSpec::ghz(2, PhotonEncoding::Polarization);
    PhotonEncoding pair_encoding = PhotonEncoding::Polarization;

    double emission_probability() const;
    double visibility() const;
    void validate(ProtocolKind kind) const;
};

Protocol build_protocol(ProtocolKind kind, const ProtocolParams &params);

}  // namespace herald

#endif
