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

#include "herald/protocols.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "herald/errors.h"

namespace herald {

namespace {

constexpr double kSpecTolerance = 1e-12;

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

std::size_t bit_of(std::size_t k, std::size_t j, std::size_t n) {
    return (k >> (n - 1 - j)) & 1U;
}

Step instrument_step(
    std::string name,
    std::function<Instrument(const SubsystemLayout &)> make,
    std::function<void(Branch &, const std::string &)> record) {
    auto label = name;
    return Step{
        std::move(name),
        [make = std::move(make), record = std::move(record), label](const Branch &b) {
            std::vector<Child> children;
            for (auto &w : unravel(b.state, make(b.state.layout()))) {
                Branch child = b;
                child.state = std::move(w.state);
                child.trail.push_back(label + ":" + w.label);
                if (record) {
                    record(child, w.label);
                }
                children.push_back({w.probability, std::move(child)});
            }
            return children;
        }};
}

Step map_step(std::string name, std::function<void(Branch &)> f) {
    return Step{std::move(name), [f = std::move(f)](const Branch &b) {
                    Branch child = b;
                    f(child);
                    return std::vector<Child>{{1.0, std::move(child)}};
                }};
}

Branch start(PureState state) {
    Branch b;
    b.state = std::move(state);
    return b;
}

/// Places a qubit-only state into a layout with `modes` vacuum modes.
PureState with_vacuum_modes(const PureState &matter, std::size_t modes, unsigned cutoff) {
    const auto &ml = matter.layout();
    if (ml.mode_count() != 0) {
        throw ValidationError("matter preparation must not contain optical modes");
    }
    SubsystemLayout layout(ml.qubit_count(), modes, cutoff);
    Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
    const std::size_t block = layout.dimension() >> ml.qubit_count();
    for (std::size_t i = 0; i < ml.dimension(); ++i) {
        amps[static_cast<Eigen::Index>(i * block)] = matter.amplitude(i);
    }
    return PureState(layout, amps).normalized();
}

std::vector<Step> hadamard_and_measure(std::size_t qubits) {
    std::vector<Step> steps;
    for (std::size_t q = 0; q < qubits; ++q) {
        steps.push_back(unitary_step("hadamard q" + std::to_string(q), gates::hadamard(), {Subsystem::qubit(q)}));
    }
    for (std::size_t q = 0; q < qubits; ++q) {
        steps.push_back(measure_and_discard_step(0));
    }
    return steps;
}

void add_presence(std::vector<Step> &steps, const std::vector<PhotonicQubit> &photons, double efficiency) {
    for (std::size_t j = 0; j < photons.size(); ++j) {
        if (efficiency < 1.0) {
            for (auto m : {photons[j].zero_mode, photons[j].one_mode}) {
                steps.push_back(instrument_step(
                    "loss m" + std::to_string(m),
                    [m, efficiency](const SubsystemLayout &l) { return loss_instrument(l, m, efficiency); },
                    nullptr));
            }
        }
        steps.push_back(presence_step(
            {photons[j].zero_mode, photons[j].one_mode}, 1, "photon " + std::to_string(j) + " missing"));
    }
}

}  // namespace

// ---------------------------------------------------------------------------

void QubitPrep::validate() const {
    double n = std::norm(up) + std::norm(down);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kSpecTolerance) {
        throw ValidationError("qubit preparation must satisfy |mu|^2 + |nu|^2 = 1");
    }
}

bool HeraldSignature::accepting() const {
    return std::count(clicks.begin(), clicks.end(), true) == 1;
}

int HeraldSignature::sign() const {
    if (!accepting()) {
        throw ValidationError("sign of a rejecting signature " + to_string());
    }
    return clicks[0] ? +1 : -1;
}

std::string HeraldSignature::to_string() const {
    std::string s = "r" + std::to_string(round) + ":";
    for (bool c : clicks) {
        s += c ? '1' : '0';
    }
    return s;
}

void CompositeQubitMap::validate() const {
    std::vector<std::size_t> seen;
    for (auto [a, b] : pairs) {
        if (a == b) {
            throw ValidationError("encoded qubit paired with itself: " + std::to_string(a));
        }
        for (auto q : {a, b}) {
            if (std::find(seen.begin(), seen.end(), q) != seen.end()) {
                throw ValidationError("physical qubit " + std::to_string(q) + " used by two encoded qubits");
            }
            seen.push_back(q);
        }
    }
}

std::string_view to_string(PhotonEncoding encoding) {
    switch (encoding) {
        case PhotonEncoding::TimeBin:
            return "time-bin";
        case PhotonEncoding::DualRail:
            return "dual-rail";
        case PhotonEncoding::Polarization:
            return "polarization";
    }
    return "?";
}

PhotonEncoding parse_encoding(std::string_view text) {
    if (text == "time-bin" || text == "timebin") {
        return PhotonEncoding::TimeBin;
    }
    if (text == "dual-rail" || text == "dualrail") {
        return PhotonEncoding::DualRail;
    }
    if (text == "polarization") {
        return PhotonEncoding::Polarization;
    }
    throw ValidationError("unknown photon encoding '" + std::string(text) + "'");
}

void MultiPhotonSpec::validate() const {
    if (photons == 0 || photons > 30) {
        throw ValidationError("photon count must be between 1 and 30");
    }
    if (amplitudes.size() != (std::size_t{1} << photons)) {
        throw ValidationError(
            "expected " + std::to_string(std::size_t{1} << photons) + " amplitudes for " + std::to_string(photons) +
            " photons, got " + std::to_string(amplitudes.size()));
    }
    double n = 0;
    for (auto a : amplitudes) {
        n += std::norm(a);
    }
    if (!std::isfinite(n) || std::abs(n - 1.0) > kSpecTolerance) {
        throw ValidationError("multi-photon amplitudes must be normalized");
    }
}

MultiPhotonSpec MultiPhotonSpec::ghz(std::size_t photons, PhotonEncoding encoding) {
    MultiPhotonSpec spec;
    spec.photons = photons;
    spec.encoding = encoding;
    if (photons == 0 || photons > 30) {
        throw ValidationError("photon count must be between 1 and 30");
    }
    spec.amplitudes.assign(std::size_t{1} << photons, 0.0);
    spec.amplitudes.front() = 1.0 / std::numbers::sqrt2;
    spec.amplitudes.back() += 1.0 / std::numbers::sqrt2;
    return spec;
}

// ---------------------------------------------------------------------------

double Protocol::fidelity(const Branch &leaf) const {
    if (!target || leaf.status != BranchStatus::Success) {
        return 0.0;
    }
    return herald::fidelity(target(leaf), apply_frame(leaf.state, leaf.frame, photons));
}

std::vector<Child> expand_step(const Step &step, const Branch &branch) {
    if (branch.status != BranchStatus::Running) {
        return {{1.0, branch}};
    }
    return step.expand(branch);
}

Branch finish(Branch branch) {
    if (branch.status == BranchStatus::Running) {
        branch.status = BranchStatus::Success;
    }
    return branch;
}

std::vector<ProtocolResult> run_branches(const Protocol &protocol) {
    std::vector<ProtocolResult> leaves;
    struct Node {
        double probability;
        std::size_t next;
        Branch branch;
    };
    std::vector<Node> stack;
    stack.push_back({1.0, 0, protocol.initial});
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (node.next == protocol.steps.size() || node.branch.status != BranchStatus::Running) {
            Branch leaf = finish(std::move(node.branch));
            ProtocolResult r;
            r.success = leaf.status == BranchStatus::Success;
            r.fidelity = protocol.fidelity(leaf);
            r.post_state = std::move(leaf.state);
            r.herald_history = std::move(leaf.heralds);
            r.frame = std::move(leaf.frame);
            r.probability = node.probability;
            r.readout = std::move(leaf.readout);
            r.note = std::move(leaf.note);
            leaves.push_back(std::move(r));
            continue;
        }
        auto children = protocol.steps[node.next].expand(node.branch);
        // reversed so leaves come out in outcome order
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
            stack.push_back({node.probability * it->probability, node.next + 1, std::move(it->branch)});
        }
    }
    return leaves;
}

double success_probability(const std::vector<ProtocolResult> &leaves) {
    double p = 0;
    for (const auto &l : leaves) {
        if (l.success) {
            p += l.probability;
        }
    }
    return p;
}

double success_fidelity(const std::vector<ProtocolResult> &leaves) {
    double p = 0, f = 0;
    for (const auto &l : leaves) {
        if (l.success) {
            p += l.probability;
            f += l.probability * l.fidelity;
        }
    }
    return p > 0 ? f / p : 0.0;
}

PureState apply_frame(const PureState &state, const PauliFrame &frame, std::span<const PhotonicQubit> photons) {
    PureState out = state;
    for (const auto &[target, c] : frame.entries()) {
        if (target.kind == FrameTarget::Kind::MatterQubit) {
            if (target.index >= out.layout().qubit_count()) {
                throw ValidationError("frame targets missing matter qubit " + std::to_string(target.index));
            }
            if (c.x) {
                out = apply_unitary(out, gates::pauli_x(), {Subsystem::qubit(target.index)});
            }
            if (c.z) {
                out = apply_unitary(out, gates::pauli_z(), {Subsystem::qubit(target.index)});
            }
        } else {
            if (target.index >= photons.size()) {
                throw ValidationError("frame targets missing photon " + std::to_string(target.index));
            }
            const auto &p = photons[target.index];
            if (c.x) {
                out = apply_element(out, BeamSplitter{p.zero_mode, p.one_mode, std::numbers::pi / 2, 0.0});
            }
            if (c.z) {
                out = apply_element(out, PhaseShift{p.one_mode, std::numbers::pi});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Step unitary_step(std::string name, Matrix u, std::vector<Subsystem> targets) {
    return map_step(std::move(name), [u = std::move(u), targets = std::move(targets)](Branch &b) {
        b.state = apply_unitary(b.state, u, targets);
    });
}

Step element_step(std::string name, OpticalElement element) {
    return map_step(std::move(name), [element](Branch &b) { b.state = apply_element(b.state, element); });
}

Step emit_step(EmitterQubit emitter, double emission_probability) {
    check_probability(emission_probability, "emission probability");
    return instrument_step(
        "pi-pulse q" + std::to_string(emitter.qubit) + "->m" + std::to_string(emitter.emission_mode),
        [emitter, emission_probability](const SubsystemLayout &) {
            return pi_pulse_instrument(emitter, emission_probability);
        },
        nullptr);
}

Step dephase_step(std::size_t mode_a, std::size_t mode_b, double visibility) {
    return instrument_step(
        "dephase m" + std::to_string(mode_a) + ",m" + std::to_string(mode_b),
        [=](const SubsystemLayout &l) { return which_path_dephasing_instrument(l, mode_a, mode_b, visibility); },
        nullptr);
}

Step detect_step(std::size_t mode, const DetectorModel &detector) {
    detector.validate();
    return instrument_step(
        "detect m" + std::to_string(mode),
        [mode, detector](const SubsystemLayout &l) { return threshold_detector_instrument(l, mode, detector); },
        [](Branch &b, const std::string &label) { b.pending_clicks.push_back(label == kClick); });
}

Step herald_step(int round, FrameTarget sign_target) {
    return map_step("herald r" + std::to_string(round), [=](Branch &b) {
        HeraldSignature sig{round, std::move(b.pending_clicks)};
        b.pending_clicks.clear();
        if (!sig.accepting()) {
            b.status = BranchStatus::Failure;
            b.note = "rejected signature " + sig.to_string();
        } else if (sig.sign() < 0) {
            b.frame.flip_z(sign_target);
        }
        b.heralds.push_back(std::move(sig));
    });
}

Step measure_and_discard_step(std::size_t q) {
    return Step{"measure q" + std::to_string(q), [q](const Branch &b) {
                    static const std::vector<Matrix> projectors = gates::computational_projectors();
                    const Subsystem target[] = {Subsystem::qubit(q)};
                    std::vector<Child> children;
                    for (auto &o : measure_projective(b.state, projectors, target)) {
                        bool value = o.label == "1";
                        Branch child = b;
                        child.state = discard_qubit(o.post_state, q, value);
                        child.readout.push_back(value);
                        child.trail.push_back("measure:" + std::string(value ? "d" : "u"));
                        children.push_back({o.probability, std::move(child)});
                    }
                    return children;
                }};
}

Step presence_step(std::vector<std::size_t> modes, unsigned expected, std::string note) {
    return instrument_step(
        "presence",
        [modes, expected](const SubsystemLayout &l) { return photon_count_instrument(l, modes, expected); },
        [note = std::move(note)](Branch &b, const std::string &label) {
            if (label != "present") {
                b.status = BranchStatus::Failure;
                b.note = note;
            }
        });
}

// ---------------------------------------------------------------------------
// Double heralding

void HeraldParams::validate() const {
    detector.validate();
    check_probability(emission_probability, "emission probability");
    check_probability(visibility, "visibility");
}

SubsystemLayout herald_layout() {
    return SubsystemLayout(2, 2);
}

namespace {

std::vector<Step> round_steps(int round, const HeraldParams &params) {
    std::vector<Step> steps;
    steps.push_back(emit_step({0, 0}, params.emission_probability));
    steps.push_back(emit_step({1, 1}, params.emission_probability));
    if (params.visibility < 1.0) {
        steps.push_back(dephase_step(0, 1, params.visibility));
    }
    steps.push_back(element_step("beam splitter", BeamSplitter{0, 1}));
    steps.push_back(detect_step(0, params.detector));
    steps.push_back(detect_step(1, params.detector));
    steps.push_back(herald_step(round, FrameTarget::matter(0)));
    return steps;
}

Step flip_both(std::string name) {
    return map_step(std::move(name), [](Branch &b) {
        b.state = apply_unitary(b.state, gates::pauli_x(), {Subsystem::qubit(0)});
        b.state = apply_unitary(b.state, gates::pauli_x(), {Subsystem::qubit(1)});
    });
}

PureState embed_two_qubits(const PureState &two_qubits) {
    const auto &l = two_qubits.layout();
    if (l.qubit_count() != 2) {
        throw ValidationError("heralding needs exactly two matter qubits");
    }
    if (l.mode_count() == 0) {
        return with_vacuum_modes(two_qubits, 2, kDefaultFockCutoff);
    }
    if (!(l == herald_layout())) {
        throw ValidationError("heralding state must use the two-qubit, two-mode layout");
    }
    for (std::size_t i = 0; i < l.dimension(); ++i) {
        if (l.total_photons(i) != 0 && std::norm(two_qubits.amplitude(i)) > kNegligibleProbability) {
            throw ValidationError("emission modes must start in vacuum");
        }
    }
    return two_qubits;
}

PureState two_qubit_product(const std::array<QubitPrep, 2> &preps) {
    for (const auto &p : preps) {
        p.validate();
    }
    const std::pair<Complex, Complex> qs[] = {{preps[0].up, preps[0].down}, {preps[1].up, preps[1].down}};
    return PureState::product(qs);
}

/// Normalized single-excitation part a|ud> + b|du> of a two-emitter state,
/// or |ud> + |du> when it vanishes.
PureState single_excitation_target(const PureState &state) {
    const auto &l = state.layout();
    Complex a = state.amplitude(l.index_of({{kUp, kDown}, {0, 0}}));
    Complex b = state.amplitude(l.index_of({{kDown, kUp}, {0, 0}}));
    if (std::norm(a) + std::norm(b) <= kNegligibleProbability) {
        a = b = 1.0;
    }
    return PureState::from_terms(l, {{a, "ud", {0, 0}}, {b, "du", {0, 0}}});
}

}  // namespace

Protocol herald_round_protocol(const PureState &two_qubits, const HeraldParams &params) {
    params.validate();
    Protocol p;
    p.id = "herald-round";
    p.initial = start(embed_two_qubits(two_qubits));
    p.steps = round_steps(1, params);
    auto target = single_excitation_target(p.initial.state);
    p.target = [target](const Branch &) { return target; };
    return p;
}

std::vector<SignatureOutcome> herald_round(const PureState &two_qubits, const HeraldParams &params) {
    auto leaves = run_branches(herald_round_protocol(two_qubits, params));
    std::map<std::vector<bool>, std::pair<double, Matrix>> groups;
    SubsystemLayout reduced_layout;
    for (const auto &leaf : leaves) {
        auto reduced = partial_trace(DensityOperator(leaf.post_state), {Subsystem::qubit(0), Subsystem::qubit(1)});
        reduced_layout = reduced.layout();
        auto &g = groups[leaf.herald_history.back().clicks];
        if (g.second.size() == 0) {
            g.second = Matrix::Zero(reduced.matrix().rows(), reduced.matrix().cols());
        }
        g.first += leaf.probability;
        g.second += leaf.probability * reduced.matrix();
    }
    std::vector<SignatureOutcome> out;
    // (click, no-click), (no-click, click), (no-click, no-click), (click, click)
    const std::vector<std::vector<bool>> order = {{true, false}, {false, true}, {false, false}, {true, true}};
    for (const auto &pattern : order) {
        auto it = groups.find(pattern);
        if (it == groups.end() || it->second.first <= kNegligibleProbability) {
            continue;
        }
        HeraldSignature sig{1, pattern};
        DensityOperator rho(reduced_layout, it->second.second / it->second.first);
        out.push_back({sig, Outcome<DensityOperator>{it->second.first, std::move(rho), sig.to_string()}});
    }
    return out;
}

double first_round_mixture_weight(double efficiency) {
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw ValidationError("first-round mixture weight needs efficiency in (0, 1]");
    }
    HeraldParams params;
    params.detector.efficiency = efficiency;
    auto outcomes = herald_round(two_qubit_product({QubitPrep::symmetric(), QubitPrep::symmetric()}), params);
    for (const auto &o : outcomes) {
        if (o.signature.clicks == std::vector<bool>{true, false}) {
            const auto &rho = o.outcome.post_state;
            auto psi = PureState::from_terms(rho.layout(), {{1.0, "ud", {}}, {1.0, "du", {}}});
            return fidelity(psi, rho);
        }
    }
    throw ValidationError("single-click signature has zero probability");
}

Protocol double_herald_protocol(std::array<QubitPrep, 2> preps, const HeraldParams &params) {
    params.validate();
    Protocol p;
    p.id = "double-herald";
    p.initial = start(embed_two_qubits(two_qubit_product(preps)));
    p.steps = round_steps(1, params);
    p.steps.push_back(flip_both("bit flip both"));
    for (auto &s : round_steps(2, params)) {
        p.steps.push_back(std::move(s));
    }
    p.steps.push_back(flip_both("restore bit flip"));
    auto target = single_excitation_target(p.initial.state);
    p.target = [target](const Branch &) { return target; };
    return p;
}

std::vector<ProtocolResult> double_herald_entangle(std::array<QubitPrep, 2> preps, const HeraldParams &params) {
    return run_branches(double_herald_protocol(preps, params));
}

// ---------------------------------------------------------------------------
// Matter-photon entanglement

Protocol hetero_timebin_protocol(QubitPrep prep, double emission_probability) {
    prep.validate();
    check_probability(emission_probability, "emission probability");
    SubsystemLayout layout(1, 2);
    Protocol p;
    p.id = "hetero-timebin";
    p.initial = start(PureState::from_terms(layout, {{prep.up, "u", {0, 0}}, {prep.down, "d", {0, 0}}}));
    p.steps.push_back(emit_step({0, 0}, emission_probability));
    p.steps.push_back(unitary_step("bit flip", gates::pauli_x(), {Subsystem::qubit(0)}));
    p.steps.push_back(emit_step({0, 1}, emission_probability));
    p.photons = {{0, 1}};
    auto target = PureState::from_terms(layout, {{prep.down, "u", {1, 0}}, {prep.up, "d", {0, 1}}});
    p.target = [target](const Branch &) { return target; };
    return p;
}

std::vector<ProtocolResult> hetero_timebin(QubitPrep prep, double emission_probability) {
    return run_branches(hetero_timebin_protocol(prep, emission_probability));
}

SubsystemLayout hetero_polarization_layout() {
    return SubsystemLayout(2, 4);
}

Protocol hetero_polarization_protocol(std::array<Complex, 2> encoded, double emission_probability) {
    QubitPrep{encoded[0], encoded[1]}.validate();
    check_probability(emission_probability, "emission probability");
    auto layout = hetero_polarization_layout();
    Protocol p;
    p.id = "hetero-polarization";
    p.initial = start(PureState::from_terms(layout, {{encoded[0], "du", {0, 0, 0, 0}}, {encoded[1], "ud", {0, 0, 0, 0}}}));
    p.steps.push_back(emit_step({0, kPortA.h_mode}, emission_probability));
    p.steps.push_back(emit_step({1, kPortB.h_mode}, emission_probability));
    p.steps.push_back(element_step(
        "rotate B", PolarizationRotation{kPortB.h_mode, kPortB.v_mode, std::numbers::pi / 2}));
    p.steps.push_back(element_step("pbs", PolarizingBeamSplitter{kPortA, kPortB}));
    p.photons = {{kPortA.h_mode, kPortA.v_mode}};
    auto target =
        PureState::from_terms(layout, {{encoded[0], "du", {1, 0, 0, 0}}, {encoded[1], "ud", {0, 1, 0, 0}}});
    p.target = [target](const Branch &) { return target; };
    return p;
}

std::vector<ProtocolResult> hetero_polarization(std::array<Complex, 2> encoded, double emission_probability) {
    return run_branches(hetero_polarization_protocol(encoded, emission_probability));
}

std::vector<Step> reduce_composite_steps(std::size_t measured) {
    std::vector<Step> steps;
    steps.push_back(unitary_step("hadamard q" + std::to_string(measured), gates::hadamard(), {Subsystem::qubit(measured)}));
    steps.push_back(measure_and_discard_step(measured));
    steps.push_back(map_step("record phase", [](Branch &b) {
        if (b.readout.back() == kDown) {
            b.frame.flip_z(FrameTarget::matter(0));
        }
    }));
    return steps;
}

Protocol reduce_composite_protocol(const PureState &hetero_state, std::size_t measured) {
    if (hetero_state.layout().qubit_count() != 2) {
        throw ValidationError("composite reduction needs exactly two matter qubits");
    }
    if (measured > 1) {
        throw ValidationError("reduce qubit must be 0 or 1, got " + std::to_string(measured));
    }
    Protocol p;
    p.id = "reduce-composite";
    p.initial = start(hetero_state.normalized());
    p.steps = reduce_composite_steps(measured);
    p.photons = {{kPortA.h_mode, kPortA.v_mode}};
    // the + outcome, reached without correction
    auto plus = apply_unitary(p.initial.state, gates::hadamard(), {Subsystem::qubit(measured)});
    auto outcomes = measure_projective(plus, gates::computational_projectors(), std::vector{Subsystem::qubit(measured)});
    PureState target;
    for (const auto &o : outcomes) {
        if (o.label == "0") {
            target = discard_qubit(o.post_state, measured, kUp);
        }
    }
    if (target.layout().dimension() <= 1) {
        throw ValidationError("reduction input has no support on the + outcome");
    }
    p.target = [target](const Branch &) { return target; };
    return p;
}

std::vector<ProtocolResult> reduce_composite(const PureState &hetero_state, std::size_t measured) {
    return run_branches(reduce_composite_protocol(hetero_state, measured));
}

// ---------------------------------------------------------------------------
// Entangled light

void GenerationParams::validate() const {
    check_probability(emission_probability, "emission probability");
    check_probability(efficiency, "efficiency");
}

namespace {

void add_photon_frame(std::vector<Step> &steps, bool dual) {
    steps.push_back(map_step("record phases", [dual](Branch &b) {
        std::size_t n = dual ? b.readout.size() / 2 : b.readout.size();
        for (std::size_t j = 0; j < n; ++j) {
            bool flip = dual ? (b.readout[2 * j] != b.readout[2 * j + 1]) : b.readout[j];
            if (flip) {
                b.frame.flip_z(FrameTarget::photon(j));
            }
        }
    }));
}

std::function<PureState(const Branch &)> photonic_target_fn(std::vector<PhotonicQubit> photons, std::vector<Complex> alpha) {
    return [photons = std::move(photons), alpha = std::move(alpha)](const Branch &leaf) {
        return photonic_target(leaf.state.layout(), photons, alpha);
    };
}

}  // namespace

Protocol timebin_generation_protocol(const PureState &matter, const GenerationParams &params) {
    params.validate();
    const std::size_t n = matter.layout().qubit_count();
    if (n == 0) {
        throw ValidationError("time-bin generation needs at least one matter qubit");
    }
    Protocol p;
    p.id = "timebin-multiphoton";
    p.initial = start(with_vacuum_modes(matter, 2 * n, 1));
    for (std::size_t j = 0; j < n; ++j) {
        p.photons.push_back({2 * j, 2 * j + 1});
    }
    for (std::size_t j = 0; j < n; ++j) {
        p.steps.push_back(emit_step({j, 2 * j}, params.emission_probability));
    }
    for (std::size_t j = 0; j < n; ++j) {
        p.steps.push_back(unitary_step("bit flip q" + std::to_string(j), gates::pauli_x(), {Subsystem::qubit(j)}));
    }
    for (std::size_t j = 0; j < n; ++j) {
        p.steps.push_back(emit_step({j, 2 * j + 1}, params.emission_probability));
    }
    add_presence(p.steps, p.photons, params.efficiency);
    for (auto &s : hadamard_and_measure(n)) {
        p.steps.push_back(std::move(s));
    }
    add_photon_frame(p.steps, false);
    const std::size_t dim = std::size_t{1} << n;
    std::vector<Complex> alpha(dim);
    auto m = matter.normalized();
    for (std::size_t k = 0; k < dim; ++k) {
        alpha[k] = m.amplitude((dim - 1) ^ k);
    }
    p.target = photonic_target_fn(p.photons, std::move(alpha));
    return p;
}

Protocol dualrail_generation_protocol(const PureState &matter, PhotonEncoding encoding, const GenerationParams &params) {
    params.validate();
    if (encoding == PhotonEncoding::TimeBin) {
        throw ValidationError("dual-rail generation needs a dual-rail or polarization encoding");
    }
    const std::size_t q = matter.layout().qubit_count();
    if (q == 0 || q % 2 != 0) {
        throw ValidationError("dual-rail generation needs an even, non-zero number of matter qubits");
    }
    const std::size_t n = q / 2;
    auto m = matter.normalized();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<Complex> alpha(dim);
    double code_weight = 0;
    for (std::size_t k = 0; k < dim; ++k) {
        std::size_t s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            // logical 0 = |du>, logical 1 = |ud>
            s = (s << 2) | (bit_of(k, j, n) ? 0b01U : 0b10U);
        }
        alpha[k] = m.amplitude(s);
        code_weight += std::norm(alpha[k]);
    }
    if (std::abs(code_weight - 1.0) > 1e-10) {
        throw ValidationError("matter state has support outside the encoded |du>, |ud> pairs");
    }
    const bool pol = encoding == PhotonEncoding::Polarization;
    Protocol p;
    p.id = pol ? "multiphoton" : "dualrail-multiphoton";
    p.initial = start(with_vacuum_modes(matter, pol ? 4 * n : 2 * n, 1));
    for (std::size_t j = 0; j < n; ++j) {
        if (pol) {
            p.steps.push_back(emit_step({2 * j, 4 * j}, params.emission_probability));
            p.steps.push_back(emit_step({2 * j + 1, 4 * j + 2}, params.emission_probability));
            p.photons.push_back({4 * j, 4 * j + 1});
        } else {
            p.steps.push_back(emit_step({2 * j, 2 * j}, params.emission_probability));
            p.steps.push_back(emit_step({2 * j + 1, 2 * j + 1}, params.emission_probability));
            p.photons.push_back({2 * j, 2 * j + 1});
        }
    }
    if (pol) {
        for (std::size_t j = 0; j < n; ++j) {
            PolarizationPort a{4 * j, 4 * j + 1}, b{4 * j + 2, 4 * j + 3};
            p.steps.push_back(element_step(
                "rotate B" + std::to_string(j), PolarizationRotation{b.h_mode, b.v_mode, std::numbers::pi / 2}));
            p.steps.push_back(element_step("pbs " + std::to_string(j), PolarizingBeamSplitter{a, b}));
        }
    }
    add_presence(p.steps, p.photons, params.efficiency);
    for (auto &s : hadamard_and_measure(q)) {
        p.steps.push_back(std::move(s));
    }
    add_photon_frame(p.steps, true);
    p.target = photonic_target_fn(p.photons, std::move(alpha));
    return p;
}

Protocol photon_pair_timebin_protocol(const GenerationParams &params) {
    auto bell = PureState::from_terms(SubsystemLayout(2, 0, 1), {{1.0, "ud", {}}, {1.0, "du", {}}});
    auto p = timebin_generation_protocol(bell, params);
    p.id = "timebin-pair";
    return p;
}

std::vector<ProtocolResult> photon_pair_timebin(const GenerationParams &params) {
    return run_branches(photon_pair_timebin_protocol(params));
}

Protocol photon_pair_dualrail_protocol(PhotonEncoding encoding, const GenerationParams &params) {
    auto ghz = PureState::from_terms(SubsystemLayout(4, 0, 1), {{1.0, "uddu", {}}, {1.0, "duud", {}}});
    auto p = dualrail_generation_protocol(ghz, encoding, params);
    p.id = "dualrail-pair";
    return p;
}

std::vector<ProtocolResult> photon_pair_dualrail(PhotonEncoding encoding, const GenerationParams &params) {
    return run_branches(photon_pair_dualrail_protocol(encoding, params));
}

PureState multiphoton_matter_state(const MultiPhotonSpec &spec) {
    spec.validate();
    const std::size_t n = spec.photons;
    const std::size_t dim = std::size_t{1} << n;
    if (spec.encoding == PhotonEncoding::TimeBin) {
        SubsystemLayout layout(n, 0, 1);
        Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < dim; ++k) {
            amps[static_cast<Eigen::Index>((dim - 1) ^ k)] = spec.amplitudes[k];
        }
        return PureState(layout, amps);
    }
    SubsystemLayout layout(2 * n, 0, 1);
    Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
    for (std::size_t k = 0; k < dim; ++k) {
        std::size_t s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            s = (s << 2) | (bit_of(k, j, n) ? 0b01U : 0b10U);
        }
        amps[static_cast<Eigen::Index>(s)] = spec.amplitudes[k];
    }
    return PureState(layout, amps);
}

Protocol multiphoton_protocol(const MultiPhotonSpec &spec, const GenerationParams &params) {
    spec.validate();
    const std::size_t n = spec.photons;
    const bool timebin = spec.encoding == PhotonEncoding::TimeBin;
    const bool pol = spec.encoding == PhotonEncoding::Polarization;
    // fail on the budget before allocating the matter state
    [[maybe_unused]] SubsystemLayout full(timebin ? n : 2 * n, pol ? 4 * n : 2 * n, 1);
    auto matter = multiphoton_matter_state(spec);
    if (spec.encoding == PhotonEncoding::TimeBin) {
        return timebin_generation_protocol(matter, params);
    }
    auto p = dualrail_generation_protocol(matter, spec.encoding, params);
    p.id = "multiphoton";
    return p;
}

std::vector<ProtocolResult> multiphoton_generate(const MultiPhotonSpec &spec, const GenerationParams &params) {
    return run_branches(multiphoton_protocol(spec, params));
}

std::vector<ProtocolResult> timebin_multiphoton_generate(const MultiPhotonSpec &spec, const GenerationParams &params) {
    auto s = spec;
    s.encoding = PhotonEncoding::TimeBin;
    return run_branches(multiphoton_protocol(s, params));
}

PureState photonic_target(
    const SubsystemLayout &layout, std::span<const PhotonicQubit> photons, std::span<const Complex> amplitudes) {
    const std::size_t n = photons.size();
    if (amplitudes.size() != (std::size_t{1} << n)) {
        throw ValidationError("photonic target needs 2^N amplitudes");
    }
    Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
    BasisLabel label{std::vector<bool>(layout.qubit_count(), false), std::vector<unsigned>(layout.mode_count(), 0)};
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
        auto l = label;
        for (std::size_t j = 0; j < n; ++j) {
            l.occupations.at(bit_of(k, j, n) ? photons[j].one_mode : photons[j].zero_mode) = 1;
        }
        amps[static_cast<Eigen::Index>(layout.index_of(l))] = amplitudes[k];
    }
    return PureState(layout, amps).normalized();
}

std::vector<Complex> logical_amplitudes(const PureState &state, std::span<const PhotonicQubit> photons) {
    const auto &layout = state.layout();
    const std::size_t n = photons.size();
    std::vector<Complex> out(std::size_t{1} << n);
    BasisLabel label{std::vector<bool>(layout.qubit_count(), false), std::vector<unsigned>(layout.mode_count(), 0)};
    for (std::size_t k = 0; k < out.size(); ++k) {
        auto l = label;
        for (std::size_t j = 0; j < n; ++j) {
            l.occupations.at(bit_of(k, j, n) ? photons[j].one_mode : photons[j].zero_mode) = 1;
        }
        out[k] = state.amplitude(layout.index_of(l));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

struct Entry {
    ProtocolKind kind;
    std::string_view name;
    std::string_view text;
};

constexpr Entry kEntries[] = {
    {ProtocolKind::HeraldRound, "herald-round",
     "herald-round: one heralding round on two emitters\n"
     "  1. pi-pulse both emitters (emission probability from cavity g, kappa, t_wait)\n"
     "  2. which-path dephasing from the cavity mismatch\n"
     "  3. combine both emission modes on a 50:50 beam splitter\n"
     "  4. threshold detection of both outputs (eta, dark_count_prob)\n"
     "  every click pattern is reported; (click, no-click) heralds |ud>+|du>,\n"
     "  (no-click, click) heralds |ud>-|du>\n"
     "inputs: prep[2] (mu, nu), eta, dark_count_prob, mismatch, g, kappa, t_wait\n"},
    {ProtocolKind::DoubleHerald, "double-herald",
     "double-herald: entangle two remote emitters by double heralding\n"
     "  1. heralding round one: pi-pulses, 50:50 beam splitter, detection\n"
     "  2. abort unless exactly one detector clicked\n"
     "  3. bit flip on both emitters\n"
     "  4. heralding round two\n"
     "  5. abort unless exactly one detector clicked\n"
     "  6. bit flip on both emitters\n"
     "  success leaves mu1 nu2 |ud> +- nu1 mu2 |du>; the sign is the product of the\n"
     "  two round signs and is kept as a phase flip in the Pauli frame\n"
     "inputs: prep[2] (mu, nu), eta, dark_count_prob, mismatch, g, kappa, t_wait\n"},
    {ProtocolKind::HeteroTimeBin, "hetero-timebin",
     "hetero-timebin: entangle one emitter with a time-bin photon\n"
     "  1. pi-pulse, wait: early bin E\n"
     "  2. bit flip\n"
     "  3. pi-pulse, wait: late bin L\n"
     "  mu|u> + nu|d> becomes nu|u>|E> + mu|d>|L>\n"
     "inputs: prep[0] (mu, nu), g, kappa, t_wait\n"},
    {ProtocolKind::HeteroPolarization, "hetero-polarization",
     "hetero-polarization: entangle an encoded qubit with a polarization photon\n"
     "  encoded qubit |0~> = |du>, |1~> = |ud> on two emitters\n"
     "  1. pi-pulse both emitters into ports A and B\n"
     "  2. rotate the polarization of port B (H -> V)\n"
     "  3. merge A and B on a polarizing beam splitter\n"
     "  a0|0~> + a1|1~> becomes a0|0~>|H> + a1|1~>|V>\n"
     "inputs: encoded (a0, a1), g, kappa, t_wait\n"},
    {ProtocolKind::ReduceComposite, "reduce-composite",
     "reduce-composite: shrink the encoded qubit back to one emitter\n"
     "  starts from the hetero-polarization output\n"
     "  1. Hadamard on one physical qubit\n"
     "  2. measure it in the computational basis and discard it\n"
     "  3. outcome |d> records a phase flip on the remaining qubit\n"
     "  result |d>|H> +- |u>|V>\n"
     "inputs: encoded (a0, a1), reduce_qubit (0 or 1)\n"},
    {ProtocolKind::TimeBinPair, "timebin-pair",
     "timebin-pair: two time-bin photons from a Bell pair of emitters\n"
     "  emitters start in |ud> + |du>\n"
     "  1. the first pi-pulse in each cavity yields the early photon\n"
     "  2. bit flip on both emitters\n"
     "  3. the second pi-pulse yields the late photon\n"
     "  4. Hadamard on both emitters and measure them\n"
     "  photons end in |E,L> +- |L,E>; outcome d on emitter j flips the phase of photon j\n"
     "inputs: eta, g, kappa, t_wait\n"},
    {ProtocolKind::DualRailPair, "dualrail-pair",
     "dualrail-pair: two photons from four emitters in |uddu> + |duud>\n"
     "  1. pi-pulse all four emitters\n"
     "  2. (polarization) rotate port B of each photon and merge on a PBS\n"
     "  3. Hadamard on all four emitters and measure them\n"
     "  photons end in |H,V> + |V,H> (or |1,0;0,1> + |0,1;1,0>) after phase corrections\n"
     "inputs: encoding (dual-rail | polarization), eta, g, kappa, t_wait\n"},
    {ProtocolKind::MultiPhoton, "multiphoton",
     "multiphoton: N entangled photons from 2N emitters\n"
     "  emitters start in sum_k alpha_k |S_k>, two emitters per photon\n"
     "  1. pi-pulse all emitters\n"
     "  2. (polarization) rotation and PBS per photon\n"
     "  3. Hadamard on all emitters and measure them (4^N outcomes)\n"
     "  4. phase-flip photon j when its two emitter outcomes differ\n"
     "  photons end in sum_k alpha_k |P_k>\n"
     "inputs: photons N, amplitudes alpha (default GHZ), encoding, eta, g, kappa, t_wait\n"},
    {ProtocolKind::TimeBinMultiPhoton, "timebin-multiphoton",
     "timebin-multiphoton: N entangled time-bin photons from N emitters\n"
     "  1. pi-pulse all emitters (early bins)\n"
     "  2. bit flip on all emitters\n"
     "  3. pi-pulse all emitters (late bins)\n"
     "  4. Hadamard on all emitters and measure them\n"
     "  5. phase-flip photon j when emitter j reads d\n"
     "  photons end in sum_k alpha_k |P_k>\n"
     "inputs: photons N, amplitudes alpha (default GHZ), eta, g, kappa, t_wait\n"},
};

}  // namespace

std::string_view protocol_name(ProtocolKind kind) {
    for (const auto &e : kEntries) {
        if (e.kind == kind) {
            return e.name;
        }
    }
    return "?";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) {
    for (const auto &e : kEntries) {
        if (e.name == name) {
            return e.kind;
        }
    }
    return std::nullopt;
}

std::vector<ProtocolKind> all_protocols() {
    std::vector<ProtocolKind> out;
    for (const auto &e : kEntries) {
        out.push_back(e.kind);
    }
    return out;
}

std::string describe(ProtocolKind kind) {
    for (const auto &e : kEntries) {
        if (e.kind == kind) {
            return std::string(e.text);
        }
    }
    throw ValidationError("unknown protocol");
}

double ProtocolParams::emission_probability() const {
    return cavity ? herald::emission_probability(*cavity) : 1.0;
}

double ProtocolParams::visibility() const {
    return mismatch_visibility(mismatch);
}

void ProtocolParams::validate(ProtocolKind kind) const {
    detector.validate();
    if (cavity) {
        cavity->validate();
    }
    visibility();
    switch (kind) {
        case ProtocolKind::HeraldRound:
        case ProtocolKind::DoubleHerald:
            preps[0].validate();
            preps[1].validate();
            break;
        case ProtocolKind::HeteroTimeBin:
            preps[0].validate();
            break;
        case ProtocolKind::HeteroPolarization:
        case ProtocolKind::ReduceComposite:
            QubitPrep{encoded[0], encoded[1]}.validate();
            if (reduce_qubit > 1) {
                throw ValidationError("reduce_qubit must be 0 or 1");
            }
            break;
        case ProtocolKind::TimeBinPair:
            break;
        case ProtocolKind::DualRailPair:
            if (pair_encoding == PhotonEncoding::TimeBin) {
                throw ValidationError("dualrail-pair needs a dual-rail or polarization encoding");
            }
            break;
        case ProtocolKind::MultiPhoton:
        case ProtocolKind::TimeBinMultiPhoton:
            multiphoton.validate();
            break;
    }
}

Protocol build_protocol(ProtocolKind kind, const ProtocolParams &params) {
    params.validate(kind);
    HeraldParams hp{params.detector, params.emission_probability(), params.visibility()};
    GenerationParams gp{params.emission_probability(), params.detector.efficiency};
    switch (kind) {
        case ProtocolKind::HeraldRound:
            return herald_round_protocol(two_qubit_product(params.preps), hp);
        case ProtocolKind::DoubleHerald:
            return double_herald_protocol(params.preps, hp);
        case ProtocolKind::HeteroTimeBin:
            return hetero_timebin_protocol(params.preps[0], hp.emission_probability);
        case ProtocolKind::HeteroPolarization:
            return hetero_polarization_protocol(params.encoded, hp.emission_probability);
        case ProtocolKind::ReduceComposite: {
            auto hetero = hetero_polarization_protocol(params.encoded);
            return reduce_composite_protocol(hetero.target(hetero.initial), params.reduce_qubit);
        }
        case ProtocolKind::TimeBinPair:
            return photon_pair_timebin_protocol(gp);
        case ProtocolKind::DualRailPair:
            return photon_pair_dualrail_protocol(params.pair_encoding, gp);
        case ProtocolKind::MultiPhoton:
            return multiphoton_protocol(params.multiphoton, gp);
        case ProtocolKind::TimeBinMultiPhoton: {
            auto spec = params.multiphoton;
            spec.encoding = PhotonEncoding::TimeBin;
            return multiphoton_protocol(spec, gp);
        }
    }
    throw ValidationError("unknown protocol");
}

}  // namespace herald
