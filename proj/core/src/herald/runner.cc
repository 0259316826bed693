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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "herald/errors.h"

namespace herald {

double BranchTree::total_probability() const {
    double p = 0;
    for (const auto &l : leaves) {
        p += l.probability;
    }
    return p;
}

double BranchTree::success_probability() const {
    return herald::success_probability(leaves);
}

double BranchTree::success_fidelity() const {
    return herald::success_fidelity(leaves);
}

std::size_t BranchTree::success_count() const {
    return static_cast<std::size_t>(std::count_if(leaves.begin(), leaves.end(), [](const auto &l) { return l.success; }));
}

BranchTree enumerate(const Protocol &protocol) {
    BranchTree tree;
    tree.protocol_id = protocol.id;
    struct Pending {
        std::size_t node;
        std::size_t next;
        double probability;  // absolute
        Branch branch;
    };
    tree.nodes.push_back({});
    std::vector<Pending> stack;
    stack.push_back({0, 0, 1.0, protocol.initial});
    while (!stack.empty()) {
        Pending cur = std::move(stack.back());
        stack.pop_back();
        if (cur.next == protocol.steps.size() || cur.branch.status != BranchStatus::Running) {
            Branch leaf = finish(std::move(cur.branch));
            ProtocolResult r;
            r.success = leaf.status == BranchStatus::Success;
            r.fidelity = protocol.fidelity(leaf);
            r.post_state = std::move(leaf.state);
            r.herald_history = std::move(leaf.heralds);
            r.frame = std::move(leaf.frame);
            r.probability = cur.probability;
            r.readout = std::move(leaf.readout);
            r.note = std::move(leaf.note);
            tree.nodes[cur.node].leaf = tree.leaves.size();
            tree.leaves.push_back(std::move(r));
            continue;
        }
        auto children = protocol.steps[cur.next].expand(cur.branch);
        if (children.size() == 1) {
            // collapse deterministic steps into the same node
            stack.push_back({cur.node, cur.next + 1, cur.probability, std::move(children[0].branch)});
            continue;
        }
        std::vector<Pending> pushed;
        for (auto &c : children) {
            std::size_t id = tree.nodes.size();
            tree.nodes.push_back({c.probability, {}, SIZE_MAX});
            tree.nodes[cur.node].children.push_back(id);
            pushed.push_back({id, cur.next + 1, cur.probability * c.probability, std::move(c.branch)});
        }
        for (auto it = pushed.rbegin(); it != pushed.rend(); ++it) {
            stack.push_back(std::move(*it));
        }
    }
    double total = tree.total_probability();
    if (std::abs(total - 1.0) > 1e-10) {
        warn("leaf probabilities of " + protocol.id + " sum to " + std::to_string(total));
    }
    return tree;
}

namespace {

constexpr std::uint64_t kChunk = 4096;

struct ChunkSum {
    std::uint64_t successes = 0;
    double fidelity = 0;
    double fidelity_sq = 0;
};

// splitmix64 finalizer over (seed, chunk)
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (chunk + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64 &gen) {
    return static_cast<double>(gen() >> 11) * 0x1p-53;
}

std::size_t draw_leaf(const BranchTree &tree, std::mt19937_64 &gen) {
    std::size_t node = 0;
    while (tree.nodes[node].leaf == SIZE_MAX) {
        const auto &children = tree.nodes[node].children;
        double u = uniform01(gen);
        double total = 0;
        for (auto c : children) {
            total += tree.nodes[c].probability;
        }
        u *= total;
        std::size_t pick = children.back();
        double acc = 0;
        for (auto c : children) {
            acc += tree.nodes[c].probability;
            if (u < acc) {
                pick = c;
                break;
            }
        }
        node = pick;
    }
    return tree.nodes[node].leaf;
}

ChunkSum run_chunk(const BranchTree &tree, std::uint64_t seed, std::uint64_t begin, std::uint64_t end) {
    ChunkSum s;
    std::mt19937_64 gen(chunk_seed(seed, begin / kChunk));
    for (std::uint64_t shot = begin; shot < end; ++shot) {
        const auto &leaf = tree.leaves[draw_leaf(tree, gen)];
        if (leaf.success) {
            ++s.successes;
            s.fidelity += leaf.fidelity;
            s.fidelity_sq += leaf.fidelity * leaf.fidelity;
        }
    }
    return s;
}

}  // namespace

RunStats sample(const BranchTree &tree, const SampleOptions &options) {
    if (options.shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    if (tree.nodes.empty()) {
        throw ValidationError("empty branch tree");
    }
    const std::uint64_t chunks = (options.shots + kChunk - 1) / kChunk;
    std::vector<ChunkSum> sums(chunks);
    unsigned workers = options.workers ? options.workers : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
    auto work = [&](unsigned w) {
        for (std::uint64_t c = w; c < chunks; c += workers) {
            sums[c] = run_chunk(tree, options.seed, c * kChunk, std::min(options.shots, (c + 1) * kChunk));
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    ChunkSum total;
    for (const auto &s : sums) {
        total.successes += s.successes;
        total.fidelity += s.fidelity;
        total.fidelity_sq += s.fidelity_sq;
    }
    RunStats r;
    r.shots = options.shots;
    r.seed = options.seed;
    r.successes = total.successes;
    const double n = static_cast<double>(r.shots);
    r.success_probability = static_cast<double>(r.successes) / n;
    r.stderr_probability = std::sqrt(r.success_probability * (1 - r.success_probability) / n);
    if (r.successes > 0) {
        const double k = static_cast<double>(r.successes);
        r.mean_fidelity = total.fidelity / k;
        double var = std::max(0.0, total.fidelity_sq / k - r.mean_fidelity * r.mean_fidelity);
        r.stderr_fidelity = std::sqrt(var / k);
    }
    return r;
}

RunStats sample(const Protocol &protocol, const SampleOptions &options) {
    if (options.shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    return sample(enumerate(protocol), options);
}

std::string CrossCheckReport::to_string() const {
    std::ostringstream out;
    out.precision(12);
    out << "probability exact=" << exact_probability << " sampled=" << sampled.success_probability
        << " dev=" << probability_deviation << "sigma; fidelity exact=" << exact_fidelity
        << " sampled=" << sampled.mean_fidelity << " dev=" << fidelity_deviation << "sigma; "
        << (agree ? "agree" : "DISAGREE");
    return out.str();
}

CrossCheckReport cross_check(const Protocol &protocol, const SampleOptions &options) {
    if (options.shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    auto tree = enumerate(protocol);
    CrossCheckReport r;
    r.exact_probability = tree.success_probability();
    r.exact_fidelity = tree.success_fidelity();
    r.sampled = sample(tree, options);
    const double n = static_cast<double>(options.shots);
    r.probability_sigma = std::sqrt(r.exact_probability * (1 - r.exact_probability) / n);
    double second = 0;
    for (const auto &l : tree.leaves) {
        if (l.success) {
            second += l.probability * l.fidelity * l.fidelity;
        }
    }
    double var_f = r.exact_probability > 0
                       ? std::max(0.0, second / r.exact_probability - r.exact_fidelity * r.exact_fidelity)
                       : 0.0;
    r.fidelity_sigma = r.sampled.successes > 0 ? std::sqrt(var_f / static_cast<double>(r.sampled.successes)) : 0.0;

    auto judge = [](double diff, double sigma, double floor, double &deviation) {
        if (sigma > 0) {
            deviation = diff / sigma;
            return deviation <= 4.0;
        }
        deviation = diff > floor ? INFINITY : 0.0;
        return diff <= floor;
    };
    bool p_ok = judge(
        std::abs(r.sampled.success_probability - r.exact_probability), r.probability_sigma, 1e-12,
        r.probability_deviation);
    bool f_ok = true;
    if (r.sampled.successes > 0) {
        f_ok = judge(std::abs(r.sampled.mean_fidelity - r.exact_fidelity), r.fidelity_sigma, 1e-9, r.fidelity_deviation);
    }
    r.agree = p_ok && f_ok;
    return r;
}

std::string_view to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::Eta:
            return "eta";
        case SweepParameter::G:
            return "g";
        case SweepParameter::Kappa:
            return "kappa";
        case SweepParameter::Mismatch:
            return "mismatch";
        case SweepParameter::Photons:
            return "photons";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    for (auto p : {SweepParameter::Eta, SweepParameter::G, SweepParameter::Kappa, SweepParameter::Mismatch,
                   SweepParameter::Photons}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    if (name == "N") {
        return SweepParameter::Photons;
    }
    throw ValidationError("unknown sweep parameter '" + std::string(name) + "'");
}

ProtocolParams sweep_point(const SweepSpec &spec, double value) {
    ProtocolParams p = spec.base;
    switch (spec.parameter) {
        case SweepParameter::Eta:
            p.detector.efficiency = value;
            break;
        case SweepParameter::G:
        case SweepParameter::Kappa:
            if (!p.cavity) {
                throw ValidationError("sweeping " + std::string(to_string(spec.parameter)) + " needs cavity parameters");
            }
            (spec.parameter == SweepParameter::G ? p.cavity->g : p.cavity->kappa) = value;
            break;
        case SweepParameter::Mismatch:
            p.mismatch = value;
            break;
        case SweepParameter::Photons: {
            if (!(value >= 1) || value != std::floor(value) || value > 30) {
                throw ValidationError("photon count must be a positive integer, got " + std::to_string(value));
            }
            p.multiphoton = MultiPhotonSpec::ghz(static_cast<std::size_t>(value), p.multiphoton.encoding);
            break;
        }
    }
    p.validate(spec.protocol);
    return p;
}

void SweepSpec::validate() const {
    if (values.empty()) {
        throw ValidationError("sweep grid is empty");
    }
    if (!exact && sampling.shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    for (double v : values) {
        sweep_point(*this, v);
    }
}

std::vector<SweepRow> sweep(const SweepSpec &spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    for (double v : spec.values) {
        auto tree = enumerate(build_protocol(spec.protocol, sweep_point(spec, v)));
        if (spec.exact) {
            rows.push_back({v, tree.success_probability(), tree.success_fidelity(), std::nullopt});
        } else {
            auto s = sample(tree, spec.sampling);
            rows.push_back({v, s.success_probability, s.mean_fidelity, s.stderr_probability});
        }
    }
    return rows;
}

}  // namespace herald
