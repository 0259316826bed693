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

#ifndef HERALD_EMITTERS_H
#define HERALD_EMITTERS_H

#include <cstddef>
#include <span>

#include "herald/hilbert.h"

namespace herald {

/// A three-level emitter in a leaky cavity. Rates are in inverse time units,
/// `t_wait` in the matching time unit.
struct CavityParams {
    double g = 0.0;
    double kappa = 1.0;
    double t_wait = 0.0;

    /// g >= 0, kappa > 0, t_wait >= 0 and g <= kappa.
    void validate() const;
};

/// Effective emission rate kappa - sqrt(kappa^2 - g^2). Throws
/// StrongCouplingError when g > kappa.
double gamma_slow(const CavityParams &p);

/// Probability that a pi-pulsed |down> emitter releases its photon within
/// t_wait: 1 - exp(-gamma_slow * t_wait).
double emission_probability(const CavityParams &p);

/// Binds matter qubit `qubit` to the optical mode its cavity output feeds.
struct EmitterQubit {
    std::size_t qubit;
    std::size_t emission_mode;
};

/// Throws ValidationError if two emitters share a qubit or an emission mode.
void check_emitters(std::span<const EmitterQubit> emitters);

/// The fused pi-pulse + decay map as an instrument with one outcome:
///   K_emit = |u><u| (x) 1 + sqrt(p) |d><d| (x) a^dagger|0><0|
///   K_dark = sqrt(1-p) |d><d| (x) |0><0|
/// The excited level never appears; a failed emission leaves |down>|0>.
Instrument pi_pulse_instrument(EmitterQubit emitter, double emission_probability);

/// Ideal conditional creation |u>|0> -> |u>|0>, |d>|0> -> |d>|1>.
PureState pi_pulse_emit(const PureState &state, EmitterQubit emitter);
DensityOperator pi_pulse_emit(const DensityOperator &rho, EmitterQubit emitter, double emission_probability);
DensityOperator pi_pulse_emit(const PureState &state, EmitterQubit emitter, const CavityParams &cavity);

/// One-sided exponential amplitude sqrt(rate) exp(-rate t / 2), t >= 0.
struct WavepacketModel {
    double rate = 1.0;

    static WavepacketModel from_cavity(const CavityParams &p) { return {gamma_slow(p)}; }
    double amplitude(double t) const;
};

/// |<a|b>| = 2 sqrt(rate_a rate_b) / (rate_a + rate_b).
double wavepacket_overlap(const WavepacketModel &a, const WavepacketModel &b);

/// Squared wavepacket overlap: the HOM visibility of the two sources.
double interference_visibility(const WavepacketModel &a, const WavepacketModel &b);

/// Visibility between two cavities whose slow rates differ by the relative
/// amount `mismatch` (rate_b = (1 + mismatch) rate_a). mismatch > -1.
double mismatch_visibility(double mismatch);

}  // namespace herald

#endif
