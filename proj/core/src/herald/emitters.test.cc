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

#include "gtest/gtest.h"

#include "herald/errors.h"
#include "herald/test_util.test.h"
#include "oracles/oracles.h"

using namespace herald;

TEST(emitters, gamma_slow) {
    ASSERT_EQ(gamma_slow({0.0, 1.0, 1.0}), 0.0);
    ASSERT_NEAR(gamma_slow({1.0, 1.0, 1.0}), 1.0, 1e-15);
    for (double g : {1e-4, 0.01, 0.3, 0.9}) {
        for (double kappa : {1.0, 2.5}) {
            double direct = kappa - std::sqrt(kappa * kappa - g * g);
            ASSERT_NEAR(gamma_slow({g, kappa, 0.0}), direct, 1e-13 * kappa);
        }
    }
    // weak coupling: g^2 / (2 kappa) + g^4 / (8 kappa^3)
    ASSERT_NEAR(gamma_slow({1e-4, 1.0, 0.0}), 0.5e-8 + 1.25e-17, 1e-23);
}

TEST(emitters, cavity_validation) {
    ASSERT_THROW(gamma_slow({1.5, 1.0, 1.0}), StrongCouplingError);
    ASSERT_THROW(CavityParams({-0.1, 1.0, 1.0}).validate(), ValidationError);
    ASSERT_THROW(CavityParams({0.1, 0.0, 1.0}).validate(), ValidationError);
    ASSERT_THROW(CavityParams({0.1, 1.0, -1.0}).validate(), ValidationError);
    try {
        gamma_slow({2.0, 1.0, 1.0});
        FAIL();
    } catch (const ValidationError &) {
    }
}

TEST(emitters, emission_probability) {
    CavityParams p{0.6, 1.0, 0.0};
    ASSERT_EQ(emission_probability(p), 0.0);
    p.t_wait = 5.0;
    ASSERT_NEAR(emission_probability(p), 1 - std::exp(-0.2 * 5.0), 1e-14);
    p.t_wait = std::numeric_limits<double>::infinity();
    ASSERT_EQ(emission_probability(p), 1.0);
    p.g = 0.0;
    ASSERT_EQ(emission_probability(p), 0.0);
}

TEST(emitters, ideal_pi_pulse) {
    SubsystemLayout layout(1, 1);
    auto psi = PureState::from_terms(layout, {{0.6, "u", {0}}, {0.8, "d", {0}}});
    auto out = pi_pulse_emit(psi, {0, 0});
    auto expected = PureState::from_terms(layout, {{0.6, "u", {0}}, {0.8, "d", {1}}});
    ASSERT_NEAR(fidelity(out, expected), 1.0, 1e-15);
    ASSERT_NEAR(out.mean_photons(0), 0.64, 1e-15);
    ASSERT_THROW(pi_pulse_emit(out, {0, 0}), OccupiedModeError);
    // |up> branches may hold a photon already
    auto up_only = PureState::basis(layout, "u", {1});
    ASSERT_NO_THROW(pi_pulse_emit(up_only, {0, 0}));
}

TEST(emitters, lossy_emission) {
    SubsystemLayout layout(1, 1);
    auto psi = PureState::from_terms(layout, {{1.0, "u", {0}}, {1.0, "d", {0}}});
    for (double p : {0.0, 0.3, 1.0}) {
        auto rho = pi_pulse_emit(DensityOperator(psi), {0, 0}, p);
        ASSERT_NEAR(rho.trace().real(), 1.0, 1e-14);
        ASSERT_NEAR(rho.mean_photons(0), 0.5 * p, 1e-14);
        ASSERT_TRUE(rho.is_physical());
        // failed emission keeps |down>|0>
        std::size_t d0 = layout.index_of({{kDown}, {0}});
        ASSERT_NEAR(rho.matrix()(d0, d0).real(), 0.5 * (1 - p), 1e-14);
    }
    ASSERT_THROW(pi_pulse_instrument({0, 0}, 1.5), ValidationError);
}

TEST(emitters, emission_channel_trace_preserving) {
    auto &rng = test_rng();
    SubsystemLayout layout(2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        // random qubit state, vacuum modes
        auto q = random_state(SubsystemLayout(2, 0), rng);
        Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dimension()));
        for (std::size_t i = 0; i < 4; ++i) {
            a[static_cast<Eigen::Index>(layout.index_of({{(i >> 1) == 1, (i & 1) == 1}, {0, 0}}))] = q.amplitude(i);
        }
        DensityOperator rho(PureState(layout, a));
        auto out = apply_channel(rho, pi_pulse_instrument({1, 0}, 0.37));
        ASSERT_NEAR(out.trace().real(), 1.0, 1e-12);
        ASSERT_TRUE(out.is_physical());
    }
}

TEST(emitters, check_emitters) {
    std::vector<EmitterQubit> ok = {{0, 0}, {1, 1}};
    ASSERT_NO_THROW(check_emitters(ok));
    std::vector<EmitterQubit> shared_mode = {{0, 0}, {1, 0}};
    ASSERT_THROW(check_emitters(shared_mode), ValidationError);
    std::vector<EmitterQubit> shared_qubit = {{0, 0}, {0, 1}};
    ASSERT_THROW(check_emitters(shared_qubit), ValidationError);
}

TEST(emitters, wavepacket_normalized) {
    WavepacketModel w{0.7};
    boost::math::quadrature::exp_sinh<double> integrator;
    double n = integrator.integrate([&](double t) { return w.amplitude(t) * w.amplitude(t); }, 0.0,
                                    std::numeric_limits<double>::infinity(), 1e-14);
    ASSERT_NEAR(n, 1.0, 1e-12);
    ASSERT_EQ(w.amplitude(-1.0), 0.0);
}

TEST(emitters, overlap_matches_quadrature) {
    for (double ga : {0.1, 1.0}) {
        for (double ratio : {1.0, 1.01, 1.05, 1.5, 4.0}) {
            double gb = ga * ratio;
            double exact = wavepacket_overlap({ga}, {gb});
            ASSERT_NEAR(exact, oracle::overlap_by_quadrature(ga, gb), 1e-12);
            ASSERT_NEAR(interference_visibility({ga}, {gb}), exact * exact, 1e-15);
        }
    }
    ASSERT_EQ(wavepacket_overlap({1.0}, {1.0}), 1.0);
    ASSERT_THROW(wavepacket_overlap({0.0}, {1.0}), ValidationError);
}

TEST(emitters, mismatch_visibility) {
    ASSERT_EQ(mismatch_visibility(0.0), 1.0);
    double o = oracle::overlap_by_quadrature(1.0, 1.05);
    ASSERT_NEAR(mismatch_visibility(0.05), o * o, 1e-12);
    ASSERT_NEAR(mismatch_visibility(0.05), mismatch_visibility(1 / 1.05 - 1), 1e-14);
    ASSERT_THROW(mismatch_visibility(-1.0), ValidationError);
}

TEST(emitters, wavepacket_from_cavity) {
    CavityParams p{0.5, 1.0, 1.0};
    ASSERT_NEAR(WavepacketModel::from_cavity(p).rate, gamma_slow(p), 1e-15);
}
