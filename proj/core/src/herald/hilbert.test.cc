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

#include "herald/hilbert.h"

#include "gtest/gtest.h"

#include "herald/errors.h"
#include "herald/test_util.test.h"

using namespace herald;

TEST(hilbert, layout_dimension_and_labels) {
    SubsystemLayout layout(2, 2, 2);
    ASSERT_EQ(layout.dimension(), 36u);
    ASSERT_EQ(layout.index_of({{kUp, kUp}, {0, 0}}), 0u);
    ASSERT_EQ(layout.ket(layout.index_of({{kUp, kDown}, {1, 0}})), "|ud;1,0>");
    ASSERT_EQ(layout.ket(layout.dimension() - 1), "|dd;2,2>");
    ASSERT_EQ(SubsystemLayout(0, 0).dimension(), 1u);
}

TEST(hilbert, layout_index_roundtrip) {
    SubsystemLayout layout(3, 3, 2);
    for (std::size_t i = 0; i < layout.dimension(); ++i) {
        auto label = layout.decompose(i);
        ASSERT_EQ(layout.index_of(label), i);
        unsigned photons = 0;
        for (auto n : label.occupations) {
            photons += n;
        }
        ASSERT_EQ(layout.total_photons(i), photons);
        for (std::size_t q = 0; q < 3; ++q) {
            ASSERT_EQ(layout.qubit_value(i, q), label.qubits[q]);
        }
    }
}

TEST(hilbert, layout_budget) {
    ASSERT_THROW(SubsystemLayout(30, 0), DimensionOverflowError);
    ASSERT_THROW(SubsystemLayout(2, 2, 2, 35), DimensionOverflowError);
    ASSERT_NO_THROW(SubsystemLayout(2, 2, 2, 36));
    ASSERT_THROW(SubsystemLayout(1, 1, 0), ValidationError);
    ASSERT_THROW(SubsystemLayout(24, 48, 1), DimensionOverflowError);
}

TEST(hilbert, concat_orders_subsystems) {
    auto c = concat(SubsystemLayout(1, 1), SubsystemLayout(2, 1));
    ASSERT_EQ(c.qubit_count(), 3u);
    ASSERT_EQ(c.mode_count(), 2u);
    ASSERT_THROW(concat(SubsystemLayout(1, 1, 1), SubsystemLayout(1, 1, 2)), ValidationError);
}

TEST(hilbert, from_terms_normalizes) {
    SubsystemLayout layout(2, 0);
    auto psi = PureState::from_terms(layout, {{1.0, "ud", {}}, {-1.0, "du", {}}});
    ASSERT_NEAR(psi.norm(), 1.0, 1e-15);
    ASSERT_NEAR(std::abs(psi.amplitude(1) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
    ASSERT_NEAR(std::abs(psi.amplitude(2) + 1 / std::sqrt(2.0)), 0.0, 1e-15);
    ASSERT_THROW(PureState::from_terms(layout, {{0.0, "ud", {}}}), ValidationError);
    ASSERT_THROW(PureState::basis(layout, "ux"), ValidationError);
}

TEST(hilbert, product_state) {
    const std::pair<Complex, Complex> qs[] = {{1.0, 0.0}, {0.6, 0.8}};
    auto psi = PureState::product(qs);
    ASSERT_NEAR(std::abs(psi.amplitude(0) - 0.6), 0.0, 1e-15);
    ASSERT_NEAR(std::abs(psi.amplitude(1) - 0.8), 0.0, 1e-15);
    ASSERT_NEAR(std::abs(psi.amplitude(2)), 0.0, 1e-15);
}

TEST(hilbert, random_unitaries_preserve_norm) {
    SubsystemLayout layout(3, 2, 2);
    auto &rng = test_rng();
    for (int trial = 0; trial < 40; ++trial) {
        auto psi = random_state(layout, rng);
        std::size_t q = rng() % 3;
        auto u = random_unitary(2, rng);
        auto out = apply_unitary(psi, u, {Subsystem::qubit(q)});
        ASSERT_NEAR(out.norm(), 1.0, 1e-12);
        auto back = apply_unitary(out, u.adjoint(), {Subsystem::qubit(q)});
        ASSERT_NEAR(fidelity(back, psi), 1.0, 1e-12);

        auto u2 = random_unitary(9, rng);
        auto out2 = apply_unitary(psi, u2, {Subsystem::mode(1), Subsystem::mode(0)});
        ASSERT_NEAR(out2.norm(), 1.0, 1e-12);
    }
}

TEST(hilbert, local_operator_matches_kronecker) {
    SubsystemLayout layout(2, 0);
    auto &rng = test_rng();
    auto psi = random_state(layout, rng);
    auto u = random_unitary(2, rng);
    auto out = apply_unitary(psi, u, {Subsystem::qubit(1)});
    // qubit 0 is the most significant digit: full operator is I (x) u
    Matrix full = Matrix::Zero(4, 4);
    full.block(0, 0, 2, 2) = u;
    full.block(2, 2, 2, 2) = u;
    Amplitudes expected = full * psi.amplitudes();
    ASSERT_LT((out.amplitudes() - expected).norm(), 1e-14);
}

TEST(hilbert, apply_unitary_rejects_bad_input) {
    SubsystemLayout layout(2, 1);
    auto psi = PureState::ground(layout);
    Matrix bad = Matrix::Identity(2, 2) * 2.0;
    ASSERT_THROW(apply_unitary(psi, bad, {Subsystem::qubit(0)}), ValidationError);
    ASSERT_THROW(apply_unitary(psi, gates::pauli_x(), {Subsystem::qubit(5)}), ValidationError);
    ASSERT_THROW(apply_unitary(psi, gates::identity(6), {Subsystem::qubit(0), Subsystem::mode(0)}), ValidationError);
    ASSERT_THROW(apply_unitary(psi, gates::identity(4), {Subsystem::qubit(0), Subsystem::qubit(0)}), ValidationError);
}

TEST(hilbert, partial_trace_of_tensor_product) {
    auto &rng = test_rng();
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_state(SubsystemLayout(1, 1), rng);
        auto b = random_state(SubsystemLayout(1, 1), rng);
        auto ab = DensityOperator(tensor(a, b));
        auto ra = partial_trace(ab, {Subsystem::qubit(0), Subsystem::mode(0)});
        auto rb = partial_trace(ab, {Subsystem::qubit(1), Subsystem::mode(1)});
        ASSERT_LT((ra.matrix() - DensityOperator(a).matrix()).norm(), 1e-12);
        ASSERT_LT((rb.matrix() - DensityOperator(b).matrix()).norm(), 1e-12);
        ASSERT_TRUE(ab.is_physical());
    }
}

TEST(hilbert, partial_trace_of_bell_pair) {
    auto bell = PureState::from_terms(SubsystemLayout(2, 0), {{1.0, "ud", {}}, {1.0, "du", {}}});
    auto r = partial_trace(DensityOperator(bell), {Subsystem::qubit(1)});
    ASSERT_LT((r.matrix() - Matrix::Identity(2, 2) / 2.0).norm(), 1e-15);
    ASSERT_THROW(partial_trace(DensityOperator(bell), std::span<const Subsystem>{}), ValidationError);
}

TEST(hilbert, born_rule) {
    auto &rng = test_rng();
    SubsystemLayout layout(2, 1);
    auto psi = random_state(layout, rng);
    auto projectors = gates::computational_projectors();
    const Subsystem target[] = {Subsystem::qubit(1)};
    auto outcomes = measure_projective(psi, projectors, target);
    double p_down = 0;
    for (std::size_t i = 0; i < layout.dimension(); ++i) {
        if (layout.qubit_value(i, 1)) {
            p_down += std::norm(psi.amplitude(i));
        }
    }
    ASSERT_EQ(outcomes.size(), 2u);
    ASSERT_NEAR(outcomes[0].probability + outcomes[1].probability, 1.0, 1e-12);
    ASSERT_NEAR(outcomes[1].probability, p_down, 1e-12);
    ASSERT_EQ(outcomes[1].label, "1");

    auto rho_out = measure_projective(DensityOperator(psi), projectors, target);
    ASSERT_NEAR(rho_out[1].probability, p_down, 1e-12);
}

TEST(hilbert, plus_state_measures_deterministically) {
    SubsystemLayout layout(1, 0);
    auto plus = apply_unitary(PureState::ground(layout), gates::hadamard(), {Subsystem::qubit(0)});
    const Subsystem target[] = {Subsystem::qubit(0)};
    auto outcomes = measure_projective(plus, gates::plus_minus_projectors(), target);
    ASSERT_EQ(outcomes.size(), 1u);
    ASSERT_NEAR(outcomes[0].probability, 1.0, 1e-15);
    ASSERT_EQ(outcomes[0].label, "0");
}

TEST(hilbert, measure_rejects_incomplete_projectors) {
    SubsystemLayout layout(1, 0);
    auto psi = PureState::ground(layout);
    std::vector<Matrix> one = {gates::computational_projectors()[0]};
    const Subsystem target[] = {Subsystem::qubit(0)};
    ASSERT_THROW(measure_projective(psi, one, target), ValidationError);
}

TEST(hilbert, discard_qubit) {
    SubsystemLayout layout(2, 1);
    auto psi = PureState::from_terms(layout, {{1.0, "du", {1}}, {1.0, "uu", {0}}});
    auto reduced = discard_qubit(psi, 1, kUp);
    ASSERT_EQ(reduced.layout().qubit_count(), 1u);
    auto expected = PureState::from_terms(reduced.layout(), {{1.0, "d", {1}}, {1.0, "u", {0}}});
    ASSERT_NEAR(fidelity(reduced, expected), 1.0, 1e-15);
    ASSERT_THROW(discard_qubit(psi, 0, kUp), ValidationError);
}

TEST(hilbert, mixture_and_physicality) {
    SubsystemLayout layout(1, 0);
    std::vector<std::pair<double, PureState>> parts = {
        {3.0, PureState::basis(layout, 0)}, {1.0, PureState::basis(layout, 1)}};
    auto rho = DensityOperator::mixture(parts);
    ASSERT_NEAR(rho.trace().real(), 1.0, 1e-15);
    ASSERT_NEAR(rho.matrix()(0, 0).real(), 0.75, 1e-15);
    ASSERT_TRUE(rho.is_physical());
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    ASSERT_FALSE(DensityOperator(layout, m).is_physical());
}

TEST(hilbert, unravel_agrees_with_density_instrument) {
    auto &rng = test_rng();
    SubsystemLayout layout(2, 0);
    auto psi = random_state(layout, rng);
    Instrument inst = {
        {"a", {local_map(gates::computational_projectors()[0], {Subsystem::qubit(0)})}},
        {"b",
         {local_map(gates::computational_projectors()[1] * std::sqrt(0.3), {Subsystem::qubit(0)}),
          local_map(gates::pauli_x() * gates::computational_projectors()[1] * std::sqrt(0.7), {Subsystem::qubit(0)})}},
    };
    auto branches = unravel(psi, inst);
    auto outcomes = apply_instrument(DensityOperator(psi), inst);
    ASSERT_EQ(outcomes.size(), 2u);
    for (const auto &o : outcomes) {
        Matrix sum = Matrix::Zero(4, 4);
        double p = 0;
        for (const auto &b : branches) {
            if (b.label == o.label) {
                sum += b.probability * DensityOperator(b.state).matrix();
                p += b.probability;
            }
        }
        ASSERT_NEAR(p, o.probability, 1e-12);
        ASSERT_LT((sum / p - o.post_state.matrix()).norm(), 1e-12);
    }
    auto total = apply_channel(DensityOperator(psi), inst);
    ASSERT_NEAR(total.trace().real(), 1.0, 1e-12);
}

TEST(hilbert, fidelity_properties) {
    auto &rng = test_rng();
    SubsystemLayout layout(1, 1);
    auto a = random_state(layout, rng);
    auto b = random_state(layout, rng);
    ASSERT_NEAR(fidelity(a, a), 1.0, 1e-12);
    ASSERT_NEAR(fidelity(a, b), fidelity(b, a), 1e-12);
    ASSERT_NEAR(fidelity(a, DensityOperator(b)), fidelity(a, b), 1e-12);
    ASSERT_THROW(fidelity(a, PureState::ground(SubsystemLayout(2, 0))), ValidationError);
}

TEST(hilbert, mean_photons) {
    SubsystemLayout layout(0, 2);
    auto psi = PureState::from_terms(layout, {{1.0, "", {2, 0}}, {1.0, "", {0, 1}}});
    ASSERT_NEAR(psi.mean_photons(0), 1.0, 1e-15);
    ASSERT_NEAR(psi.mean_photons(1), 0.5, 1e-15);
    ASSERT_NEAR(DensityOperator(psi).mean_photons(0), 1.0, 1e-15);
}
