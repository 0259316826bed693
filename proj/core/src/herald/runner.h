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

#ifndef HERALD_RUNNER_H
#define HERALD_RUNNER_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "herald/protocols.h"

namespace herald {

/// Every trajectory of a protocol. `nodes[0]` is the root; children of a
/// node carry conditional probabilities, leaves point into `leaves`.
struct BranchTree {
    struct Node {
        double probability = 1.0;  // conditional on the parent
        std::vector<std::size_t> children;
        std::size_t leaf = SIZE_MAX;
    };

    std::string protocol_id;
    std::vector<Node> nodes;
    std::vector<ProtocolResult> leaves;

    double total_probability() const;
    double success_probability() const;
    double success_fidelity() const;
    std::size_t success_count() const;
};

/// Exhaustive enumeration. Warns when leaf probabilities miss 1 by > 1e-10.
BranchTree enumerate(const Protocol &protocol);

struct RunStats {
    std::uint64_t shots = 0;
    std::uint64_t successes = 0;
    double success_probability = 0.0;
    /// sqrt(p (1 - p) / shots)
    double stderr_probability = 0.0;
    double mean_fidelity = 0.0;
    double stderr_fidelity = 0.0;
    std::uint64_t seed = 0;
    bool operator==(const RunStats &) const = default;
};

struct SampleOptions {
    std::uint64_t shots = 10000;
    std::uint64_t seed = 1;
    /// 0 picks the hardware concurrency.
    unsigned workers = 0;
};

/// Monte Carlo over trajectories, choosing each instrument outcome from its
/// exact conditional distribution. Shots run in fixed blocks of 4096, each with
/// its own generator seeded by (seed, block), so results do not depend on the
/// worker count.
RunStats sample(const BranchTree &tree, const SampleOptions &options);
RunStats sample(const Protocol &protocol, const SampleOptions &options);

struct CrossCheckReport {
    double exact_probability = 0.0;
    double exact_fidelity = 0.0;
    RunStats sampled;
    double probability_sigma = 0.0;  // exact standard error at this shot count
    double fidelity_sigma = 0.0;
    double probability_deviation = 0.0;  // |sampled - exact| / sigma
    double fidelity_deviation = 0.0;
    bool agree = false;

    std::string to_string() const;
};

/// Agreement means both deviations are within 4 sigma. A vanishing sigma
/// demands agreement to 1e-12 (probability) or 1e-9 (fidelity).
CrossCheckReport cross_check(const Protocol &protocol, const SampleOptions &options);

enum class SweepParameter { Eta, G, Kappa, Mismatch, Photons };

std::string_view to_string(SweepParameter parameter);
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepSpec {
    ProtocolKind protocol = ProtocolKind::DoubleHerald;
    ProtocolParams base;
    SweepParameter parameter = SweepParameter::Eta;
    std::vector<double> values;
    bool exact = true;
    SampleOptions sampling;

    void validate() const;
};

struct SweepRow {
    double value;
    double success_probability;
    double success_fidelity;
    std::optional<double> stderr_probability;  // sampled rows only
};

/// Parameters of `base` with `parameter` set to `value`.
ProtocolParams sweep_point(const SweepSpec &spec, double value);
std::vector<SweepRow> sweep(const SweepSpec &spec);

}  // namespace herald

#endif
