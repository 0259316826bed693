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

#include "herald/emitters.h"

#include <cmath>
#include <string>

#include "herald/errors.h"

namespace herald {

void CavityParams::validate() const {
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw ValidationError("cavity g must be finite and non-negative");
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw ValidationError("cavity kappa must be finite and positive");
    }
    if (!(t_wait >= 0.0)) {
        throw ValidationError("cavity t_wait must be non-negative");
    }
    if (g > kappa) {
        throw StrongCouplingError(
            "g = " + std::to_string(g) + " exceeds kappa = " + std::to_string(kappa) +
            "; the slow emission rate is only defined for kappa >= g");
    }
}

double gamma_slow(const CavityParams &p) {
    p.validate();
    // kappa - sqrt(kappa^2 - g^2) loses precision for g << kappa.
    double root = std::sqrt((p.kappa - p.g) * (p.kappa + p.g));
    return p.g * p.g / (p.kappa + root);
}

double emission_probability(const CavityParams &p) {
    double rate = gamma_slow(p);
    if (std::isinf(p.t_wait)) {
        return rate > 0 ? 1.0 : 0.0;
    }
    return -std::expm1(-rate * p.t_wait);
}

void check_emitters(std::span<const EmitterQubit> emitters) {
    for (std::size_t i = 0; i < emitters.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (emitters[i].emission_mode == emitters[j].emission_mode) {
                throw ValidationError(
                    "emitters on qubits " + std::to_string(emitters[j].qubit) + " and " +
                    std::to_string(emitters[i].qubit) + " share emission mode " +
                    std::to_string(emitters[i].emission_mode));
            }
            if (emitters[i].qubit == emitters[j].qubit) {
                throw ValidationError("two emitters bound to qubit " + std::to_string(emitters[i].qubit));
            }
        }
    }
}

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("emission probability must lie in [0, 1]");
    }
}

enum class EmissionBranch { Emitted, NotEmitted };

Amplitudes apply_emission(
    const SubsystemLayout &layout, const Amplitudes &in, EmitterQubit e, EmissionBranch branch, double scale) {
    layout.check_subsystem(Subsystem::qubit(e.qubit));
    layout.check_subsystem(Subsystem::mode(e.emission_mode));
    const std::size_t mode_stride = layout.stride(Subsystem::mode(e.emission_mode));
    Amplitudes out = Amplitudes::Zero(in.size());
    for (std::size_t i = 0; i < layout.dimension(); ++i) {
        Complex a = in[static_cast<Eigen::Index>(i)];
        if (a == Complex(0.0)) {
            continue;
        }
        if (layout.qubit_value(i, e.qubit) == kUp) {
            if (branch == EmissionBranch::Emitted) {
                out[static_cast<Eigen::Index>(i)] += a;
            }
            continue;
        }
        if (layout.occupation(i, e.emission_mode) != 0) {
            if (std::norm(a) > kNegligibleProbability) {
                throw OccupiedModeError(
                    "emission mode " + std::to_string(e.emission_mode) + " already holds a photon in a |down> branch of "
                    "qubit " + std::to_string(e.qubit));
            }
            continue;
        }
        if (branch == EmissionBranch::Emitted) {
            out[static_cast<Eigen::Index>(i + mode_stride)] += scale * a;
        } else {
            out[static_cast<Eigen::Index>(i)] += scale * a;
        }
    }
    return out;
}

}  // namespace

Instrument pi_pulse_instrument(EmitterQubit emitter, double p) {
    check_probability(p);
    KrausOutcome outcome{"emit", {}};
    double emit_scale = std::sqrt(p);
    outcome.kraus.push_back([emitter, emit_scale](const SubsystemLayout &layout, const Amplitudes &a) {
        return apply_emission(layout, a, emitter, EmissionBranch::Emitted, emit_scale);
    });
    if (p < 1.0) {
        double dark_scale = std::sqrt(1.0 - p);
        outcome.kraus.push_back([emitter, dark_scale](const SubsystemLayout &layout, const Amplitudes &a) {
            return apply_emission(layout, a, emitter, EmissionBranch::NotEmitted, dark_scale);
        });
    }
    return {outcome};
}

PureState pi_pulse_emit(const PureState &state, EmitterQubit emitter) {
    return PureState(state.layout(), apply_emission(state.layout(), state.amplitudes(), emitter, EmissionBranch::Emitted, 1.0));
}

DensityOperator pi_pulse_emit(const DensityOperator &rho, EmitterQubit emitter, double p) {
    return apply_channel(rho, pi_pulse_instrument(emitter, p));
}

DensityOperator pi_pulse_emit(const PureState &state, EmitterQubit emitter, const CavityParams &cavity) {
    return pi_pulse_emit(DensityOperator(state), emitter, emission_probability(cavity));
}

double WavepacketModel::amplitude(double t) const {
    if (t < 0) {
        return 0.0;
    }
    return std::sqrt(rate) * std::exp(-0.5 * rate * t);
}

double wavepacket_overlap(const WavepacketModel &a, const WavepacketModel &b) {
    if (!(a.rate > 0.0) || !(b.rate > 0.0)) {
        throw ValidationError("wavepacket rates must be positive");
    }
    // Written via the ratio so extreme rate pairs neither overflow nor underflow.
    double r = std::sqrt(b.rate / a.rate);
    return 2.0 * r / (1.0 + r * r);
}

double interference_visibility(const WavepacketModel &a, const WavepacketModel &b) {
    double o = wavepacket_overlap(a, b);
    return o * o;
}

double mismatch_visibility(double mismatch) {
    if (!(mismatch > -1.0) || !std::isfinite(mismatch)) {
        throw ValidationError("mismatch fraction must be finite and greater than -1");
    }
    return interference_visibility({1.0}, {1.0 + mismatch});
}

}  // namespace herald
