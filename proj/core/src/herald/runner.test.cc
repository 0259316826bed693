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

#include "herald/runner.h"

#include "gtest/gtest.h"

#include "herald/errors.h"
#include "oracles/oracles.h"

using namespace herald;

namespace {

Protocol double_herald(double eta, double mismatch = 0.0) {
    ProtocolParams p;
    p.detector.efficiency = eta;
    p.mismatch = mismatch;
    return build_protocol(ProtocolKind::DoubleHerald, p);
}

Protocol ghz(std::size_t n, double eta = 1.0) {
    ProtocolParams p;
    p.detector.efficiency = eta;
    p.multiphoton = MultiPhotonSpec::ghz(n, PhotonEncoding::Polarization);
    return build_protocol(ProtocolKind::MultiPhoton, p);
}

}  // namespace

TEST(enumerate, leaves_sum_to_one) {
    ProtocolParams params;
    params.detector.efficiency = 0.7;
    params.detector.dark_count_prob = 1e-3;
    params.cavity = CavityParams{0.3, 1.0, 50.0};
    for (auto kind : all_protocols()) {
        auto tree = enumerate(build_protocol(kind, params));
        ASSERT_NEAR(tree.total_probability(), 1.0, 1e-10) << protocol_name(kind);
        ASSERT_LE(tree.success_probability(), 1.0 + 1e-12);
        ASSERT_EQ(tree.protocol_id, protocol_name(kind));
    }
}

TEST(enumerate, no_detection_no_success) {
    auto tree = enumerate(double_herald(0.0));
    ASSERT_EQ(tree.success_count(), 0u);
    ASSERT_EQ(tree.success_probability(), 0.0);
    ASSERT_NEAR(tree.total_probability(), 1.0, 1e-15);
}

TEST(enumerate, ghz_outcomes_equally_likely) {
    auto tree = enumerate(ghz(2));
    ASSERT_EQ(tree.success_count(), 16u);
    for (const auto &l : tree.leaves) {
        ASSERT_NEAR(l.probability, 1.0 / 16, 1e-12);
    }
}

TEST(enumerate, node_probabilities_are_conditional) {
    auto tree = enumerate(double_herald(0.6));
    for (const auto &node : tree.nodes) {
        if (node.children.empty()) {
            continue;
        }
        double sum = 0;
        for (auto c : node.children) {
            sum += tree.nodes[c].probability;
        }
        ASSERT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(sample, deterministic_in_seed_and_workers) {
    auto tree = enumerate(double_herald(0.8));
    SampleOptions a{20000, 7, 1}, b{20000, 7, 4}, c{20000, 8, 4};
    auto ra = sample(tree, a);
    ASSERT_EQ(ra, sample(tree, b));
    ASSERT_EQ(ra, sample(tree, a));
    ASSERT_NE(ra.successes, sample(tree, c).successes);
    ASSERT_EQ(ra.seed, 7u);
    ASSERT_EQ(ra.shots, 20000u);
}

TEST(sample, agrees_with_exact) {
    for (double eta : {1.0, 0.5}) {
        auto tree = enumerate(double_herald(eta));
        auto s = sample(tree, {100000, 3, 0});
        double p = eta * eta / 2;
        double sigma = std::sqrt(p * (1 - p) / 1e5);
        ASSERT_LT(std::abs(s.success_probability - p), 3 * sigma) << eta;
        ASSERT_NEAR(s.stderr_probability, sigma, sigma * 0.05);
        ASSERT_NEAR(s.mean_fidelity, 1.0, 1e-12);
    }
}

TEST(sample, zero_shots_rejected) {
    ASSERT_THROW(sample(double_herald(1.0), {0, 1, 1}), ValidationError);
}

TEST(sample, converges_over_many_seeds) {
    auto tree = enumerate(double_herald(0.9));
    double p = 0.405;
    int within = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        auto s = sample(tree, {2000, static_cast<std::uint64_t>(1000 + t), 1});
        within += std::abs(s.success_probability - p) < 2 * std::sqrt(p * (1 - p) / 2000);
    }
    // about 95% expected; a broken sampler lands far lower
    ASSERT_GE(within, 85);
}

TEST(cross_check, ideal_and_mismatch) {
    auto ideal = cross_check(double_herald(1.0), {50000, 11, 0});
    ASSERT_TRUE(ideal.agree) << ideal.to_string();
    ASSERT_NEAR(ideal.exact_probability, 0.5, 1e-12);

    auto mismatched = cross_check(double_herald(1.0, 0.05), {50000, 12, 0});
    ASSERT_TRUE(mismatched.agree) << mismatched.to_string();
    ASSERT_LT(mismatched.exact_fidelity, 1.0);

    auto certain = cross_check(ghz(1), {1000, 1, 0});
    ASSERT_LT(certain.probability_sigma, 1e-8);
    ASSERT_TRUE(certain.agree) << certain.to_string();
}

TEST(sweep, eta_grid) {
    SweepSpec spec;
    spec.values = {0.1, 0.4, 0.7, 1.0};
    auto rows = sweep(spec);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto &r : rows) {
        ASSERT_NEAR(r.success_probability, r.value * r.value / 2, 1e-12);
        ASSERT_NEAR(r.success_fidelity, 1.0, 1e-12);
        ASSERT_FALSE(r.stderr_probability.has_value());
    }
}

TEST(sweep, photon_count_is_geometric) {
    SweepSpec spec;
    spec.protocol = ProtocolKind::MultiPhoton;
    spec.base.detector.efficiency = 0.8;
    spec.parameter = SweepParameter::Photons;
    spec.values = {1, 2, 3};
    auto rows = sweep(spec);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_NEAR(rows[i].success_probability / rows[i - 1].success_probability, 0.8, 1e-10);
    }
}

TEST(sweep, mismatch_grid) {
    SweepSpec spec;
    spec.parameter = SweepParameter::Mismatch;
    spec.values = {0.0, 0.01, 0.05};
    auto rows = sweep(spec);
    ASSERT_NEAR(rows[0].success_fidelity, 1.0, 1e-12);
    for (const auto &r : rows) {
        double o = oracle::overlap_by_quadrature(1.0, 1.0 + r.value);
        ASSERT_NEAR(r.success_fidelity, oracle::double_herald_fidelity(o), 1e-10);
        ASSERT_LT(1.0 - r.success_fidelity, 1e-3);
    }
}

TEST(sweep, sampled_rows_carry_stderr) {
    SweepSpec spec;
    spec.values = {0.5};
    spec.exact = false;
    spec.sampling = {5000, 2, 1};
    auto rows = sweep(spec);
    ASSERT_TRUE(rows[0].stderr_probability.has_value());
}

TEST(sweep, invalid_grids) {
    SweepSpec spec;
    ASSERT_THROW(sweep(spec), ValidationError);
    spec.values = {0.5, 1.5};
    ASSERT_THROW(sweep(spec), ValidationError);
    spec.parameter = SweepParameter::G;
    spec.values = {0.1};
    ASSERT_THROW(sweep(spec), ValidationError);
    spec.protocol = ProtocolKind::MultiPhoton;
    spec.parameter = SweepParameter::Photons;
    spec.values = {2.5};
    ASSERT_THROW(sweep(spec), ValidationError);
    ASSERT_EQ(parse_sweep_parameter("N"), SweepParameter::Photons);
    ASSERT_THROW(parse_sweep_parameter("temperature"), ValidationError);
}
