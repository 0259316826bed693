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

// Acceptance checks. One PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "herald/emitters.h"
#include "herald/optics.h"
#include "herald/protocols.h"
#include "herald/runner.h"
#include "oracles/oracles.h"

using namespace herald;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

const std::vector<double> kEtas = {0.1, 0.25, 0.5, 0.75, 1.0};
const std::array<QubitPrep, 2> kSymmetric = {QubitPrep::symmetric(), QubitPrep::symmetric()};

HeraldParams with_eta(double eta) {
    HeraldParams p;
    p.detector.efficiency = eta;
    return p;
}

Check success_probability_check() {
    Check c;
    for (double eta : kEtas) {
        auto tree = enumerate(double_herald_protocol(kSymmetric, with_eta(eta)));
        double err = std::abs(tree.success_probability() - eta * eta / 2);
        c.require(err < 1e-12, "eta=" + num(eta) + " err=" + num(err));
    }
    return c;
}

Check loss_robustness_check() {
    Check c;
    for (double eta : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
        auto leaves = double_herald_entangle(kSymmetric, with_eta(eta));
        for (const auto &l : leaves) {
            if (!l.success) {
                continue;
            }
            int sign = l.herald_history[0].sign() * l.herald_history[1].sign();
            auto bell = PureState::from_terms(
                herald_layout(), {{1.0, "ud", {0, 0}}, {static_cast<double>(sign), "du", {0, 0}}});
            double f = fidelity(bell, l.post_state);
            c.require(std::abs(f - 1) < 1e-12, "eta=" + num(eta) + " F=" + num(f));
        }
        c.require(std::abs(success_fidelity(leaves) - 1) < 1e-12, "eta=" + num(eta) + " mean fidelity");
    }
    return c;
}

Check splitter_state_check() {
    Check c;
    SubsystemLayout layout(2, 2, 2);
    const double r = 1 / std::sqrt(2.0);
    auto psi = PureState::from_terms(
        layout, {{1.0, "uu", {0, 0}}, {1.0, "ud", {0, 0}}, {1.0, "du", {0, 0}}, {1.0, "dd", {0, 0}}});
    psi = pi_pulse_emit(psi, {0, 0});
    psi = pi_pulse_emit(psi, {1, 1});
    psi = apply_element(psi, BeamSplitter{0, 1});

    // pinned amplitudes against the independent expansion
    double worst = 0;
    double covered = 0;
    for (const auto &[key, a] : oracle::two_emitters_after_splitter({r, r}, {r, r})) {
        auto [q0, q1, n0, n1] = key;
        std::string q = {q0 ? 'd' : 'u', q1 ? 'd' : 'u'};
        auto basis = PureState::basis(layout, q, {static_cast<unsigned>(n0), static_cast<unsigned>(n1)});
        Complex got = basis.amplitudes().dot(psi.amplitudes());
        worst = std::max(worst, std::abs(got - a));
        covered += std::norm(got);
    }
    c.require(worst < 1e-12, "amplitude err=" + num(worst));
    c.require(std::abs(covered - 1) < 1e-12, "support outside expansion");

    // branch pattern: (ud+du)|0,1>, (ud-du)|1,0>, dd(|2,0>-|0,2>)/sqrt2, up to port
    // relabeling and a sign per branch
    auto pattern = PureState::from_terms(
        layout,
        {{1.0, "uu", {0, 0}},
         {r, "ud", {0, 1}},
         {r, "du", {0, 1}},
         {r, "ud", {1, 0}},
         {-r, "du", {1, 0}},
         {r, "dd", {2, 0}},
         {-r, "dd", {0, 2}}});
    auto relabeled = apply_element(psi, BeamSplitter{0, 1, std::numbers::pi / 2});
    std::vector<std::vector<Term>> branches = {
        {{1.0, "uu", {0, 0}}},
        {{r, "ud", {0, 1}}, {r, "du", {0, 1}}},
        {{r, "ud", {1, 0}}, {-r, "du", {1, 0}}},
        {{r, "dd", {2, 0}}, {-r, "dd", {0, 2}}},
    };
    double residual = 1;
    for (const auto &terms : branches) {
        auto b = PureState::from_terms(layout, terms);
        Complex x = b.amplitudes().dot(relabeled.amplitudes());
        Complex y = b.amplitudes().dot(pattern.amplitudes());
        c.require(std::abs(std::abs(x) - std::abs(y)) < 1e-12, "branch weight");
        c.require(std::abs(std::abs(x.real()) - std::abs(x)) < 1e-12, "branch phase not real");
        residual -= std::norm(x);
    }
    c.require(std::abs(residual) < 1e-12, "pattern residual=" + num(residual));
    return c;
}

Check mixture_check() {
    Check c;
    auto psi = PureState::product(std::vector<std::pair<Complex, Complex>>(2, {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}));
    for (double eta : kEtas) {
        for (const auto &o : herald_round(psi, with_eta(eta))) {
            if (!o.signature.accepting()) {
                continue;
            }
            const auto &rho = o.outcome.post_state;
            double f = first_round_mixture_weight(eta);
            auto bell = PureState::from_terms(
                rho.layout(), {{1.0, "ud", {}}, {static_cast<double>(o.signature.sign()), "du", {}}});
            auto dd = PureState::basis(rho.layout(), "dd");
            Matrix model = f * bell.amplitudes() * bell.amplitudes().adjoint() +
                           (1 - f) * dd.amplitudes() * dd.amplitudes().adjoint();
            double residual = (rho.matrix() - model).norm();
            c.require(residual < 1e-12, "eta=" + num(eta) + " residual=" + num(residual));
            c.require(std::abs(fidelity(bell, rho) - f) < 1e-12, "eta=" + num(eta) + " f from state");
            c.require(std::abs(f - oracle::mixture_weight(eta)) < 1e-12, "eta=" + num(eta) + " f vs oracle");
            c.require(std::abs(f - 2 / (4 - eta)) < 1e-12, "eta=" + num(eta) + " f vs closed form");
        }
    }
    return c;
}

Check hetero_check() {
    Check c;
    const double r = 1 / std::sqrt(2.0);
    auto tb = hetero_timebin(QubitPrep::symmetric());
    auto tb_target = PureState::from_terms(SubsystemLayout(1, 2), {{1.0, "u", {1, 0}}, {1.0, "d", {0, 1}}});
    c.require(std::abs(fidelity(tb_target, tb[0].post_state) - 1) < 1e-12, "time-bin");

    auto pol = hetero_polarization({r, r});
    auto pol_target =
        PureState::from_terms(hetero_polarization_layout(), {{1.0, "du", {1, 0, 0, 0}}, {1.0, "ud", {0, 1, 0, 0}}});
    c.require(std::abs(fidelity(pol_target, pol[0].post_state) - 1) < 1e-12, "polarization");

    SubsystemLayout reduced(1, 4);
    auto leaves = reduce_composite(pol[0].post_state, 1);
    c.require(leaves.size() == 2, "reduction outcomes");
    for (const auto &l : leaves) {
        double sign = l.readout[0] == kUp ? 1.0 : -1.0;
        auto target = PureState::from_terms(reduced, {{1.0, "d", {1, 0, 0, 0}}, {sign, "u", {0, 1, 0, 0}}});
        c.require(std::abs(fidelity(target, l.post_state) - 1) < 1e-12, "reduced state");
        c.require(std::abs(l.fidelity - 1) < 1e-12, "reduced fidelity");
    }
    return c;
}

Check photon_pair_check() {
    Check c;
    SubsystemLayout layout(0, 4, 1);
    auto tb = photon_pair_timebin();
    c.require(tb.size() == 4, "time-bin outcome count");
    for (const auto &l : tb) {
        c.require(std::abs(l.probability - 0.25) < 1e-12, "time-bin probability");
        double s_el = l.readout[1] ? -1.0 : 1.0;
        double s_le = l.readout[0] ? -1.0 : 1.0;
        auto line = PureState::from_terms(layout, {{s_el, "", {1, 0, 0, 1}}, {s_le, "", {0, 1, 1, 0}}});
        c.require(std::abs(line.amplitudes().dot(l.post_state.amplitudes()) - 1.0) < 1e-12, "time-bin line");
        c.require(std::abs(l.fidelity - 1) < 1e-12, "time-bin corrected fidelity");
    }
    auto protocol = photon_pair_dualrail_protocol(PhotonEncoding::Polarization);
    auto dr = run_branches(protocol);
    c.require(dr.size() == 16, "dual-rail outcome count");
    for (const auto &l : dr) {
        c.require(std::abs(l.probability - 1.0 / 16) < 1e-12, "dual-rail probability");
        auto amps = logical_amplitudes(apply_frame(l.post_state, l.frame, protocol.photons), protocol.photons);
        double f = std::norm((amps[1] + amps[2]) / std::sqrt(2.0));
        c.require(std::abs(f - 1) < 1e-12, "dual-rail HV+VH fidelity=" + num(f));
    }
    return c;
}

Check multiphoton_check() {
    Check c;
    std::mt19937_64 rng(20260419);
    std::normal_distribution<double> gauss;
    for (auto enc : {PhotonEncoding::Polarization, PhotonEncoding::DualRail}) {
        for (std::size_t n = 1; n <= 3; ++n) {
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<Complex> alpha(std::size_t{1} << n);
                double norm = 0;
                for (auto &a : alpha) {
                    a = {gauss(rng), gauss(rng)};
                    norm += std::norm(a);
                }
                for (auto &a : alpha) {
                    a /= std::sqrt(norm);
                }
                auto protocol = multiphoton_protocol(MultiPhotonSpec{n, alpha, enc});
                auto leaves = run_branches(protocol);
                c.require(leaves.size() == (std::size_t{1} << (2 * n)), "outcome count N=" + std::to_string(n));
                for (const auto &l : leaves) {
                    auto amps = logical_amplitudes(apply_frame(l.post_state, l.frame, protocol.photons), protocol.photons);
                    Complex ip = 0;
                    for (std::size_t k = 0; k < alpha.size(); ++k) {
                        ip += std::conj(alpha[k]) * amps[k];
                    }
                    double f = std::norm(ip);
                    c.require(f >= 1 - 1e-10, "N=" + std::to_string(n) + " F=" + num(f));
                    c.require(l.success && l.fidelity >= 1 - 1e-10, "leaf fidelity");
                }
            }
        }
    }
    return c;
}

Check mismatch_check() {
    Check c;
    ProtocolParams params;
    params.mismatch = 0.05;
    auto tree = enumerate(build_protocol(ProtocolKind::DoubleHerald, params));
    double drop = 1 - tree.success_fidelity();
    double o = oracle::overlap_by_quadrature(1.0, 1.05);
    double expected = 1 - oracle::double_herald_fidelity(o);
    c.require(drop < 1e-3, "drop=" + num(drop));
    c.require(std::abs(drop - expected) < 1e-12, "drop vs overlap oracle " + num(std::abs(drop - expected)));
    c.detail = c.ok ? "drop=" + num(drop) : c.detail;
    return c;
}

Check scaling_check() {
    Check c;
    std::vector<double> p;
    for (std::size_t n = 1; n <= 3; ++n) {
        ProtocolParams params;
        params.detector.efficiency = 0.8;
        params.multiphoton = MultiPhotonSpec::ghz(n, PhotonEncoding::Polarization);
        p.push_back(enumerate(build_protocol(ProtocolKind::MultiPhoton, params)).success_probability());
    }
    double r1 = p[1] / p[0], r2 = p[2] / p[1];
    c.require(std::abs(r1 - r2) < 1e-10, "ratios " + num(r1) + " " + num(r2));
    c.require(r1 < 1, "not decreasing");
    return c;
}

std::string fingerprint(const RunStats &s) {
    char buf[256];
    std::snprintf(
        buf, sizeof(buf), "%llu,%llu,%.17g,%.17g,%.17g,%.17g", static_cast<unsigned long long>(s.shots),
        static_cast<unsigned long long>(s.successes), s.success_probability, s.stderr_probability, s.mean_fidelity,
        s.stderr_fidelity);
    return buf;
}

Check engine_check() {
    Check c;
    ProtocolParams ghz;
    ghz.multiphoton = MultiPhotonSpec::ghz(2, PhotonEncoding::Polarization);
    ghz.detector.efficiency = 0.8;
    ProtocolParams dh;
    dh.detector.efficiency = 0.8;
    std::vector<std::pair<Protocol, std::uint64_t>> cases = {
        {build_protocol(ProtocolKind::DoubleHerald, dh), 20260419},
        {build_protocol(ProtocolKind::MultiPhoton, ghz), 20260420},
    };
    for (const auto &[protocol, seed] : cases) {
        auto tree = enumerate(protocol);
        SampleOptions opts{100000, seed, 0};
        auto a = sample(tree, opts);
        double p = tree.success_probability();
        double sigma = std::sqrt(p * (1 - p) / 1e5);
        c.require(std::abs(a.success_probability - p) <= 4 * sigma, protocol.id + " outside 4 sigma");
        auto report = cross_check(protocol, opts);
        c.require(report.agree, report.to_string());
        opts.workers = 1;
        auto b = sample(tree, opts);
        c.require(fingerprint(a) == fingerprint(b), protocol.id + " rerun differs");
        c.require(fingerprint(a) == fingerprint(report.sampled), protocol.id + " rerun differs");
    }
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        std::function<Check()> run;
        double limit_seconds;
    };
    std::vector<Criterion> criteria = {
        {1, "double-herald success probability", success_probability_check, 1.0},
        {2, "loss robustness", loss_robustness_check, 0},
        {3, "splitter state pattern", splitter_state_check, 0},
        {4, "first-round mixture", mixture_check, 0},
        {5, "hetero-entanglement targets", hetero_check, 0},
        {6, "entangled photon pairs", photon_pair_check, 0},
        {7, "multi-photon factory", multiphoton_check, 60.0},
        {8, "mismatch bound", mismatch_check, 0},
        {9, "geometric scaling", scaling_check, 0},
        {10, "engine consistency", engine_check, 0},
    };
    int failed = 0;
    for (const auto &cr : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = cr.run();
        } catch (const std::exception &e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.limit_seconds > 0 && secs >= cr.limit_seconds) {
            c.require(false, "took " + num(secs) + " s");
        }
        failed += !c.ok;
        std::printf(
            "%s criterion %d: %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
            c.detail.empty() ? "" : " ", c.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
