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

#ifndef HERALD_CLI_SCENARIO_H
#define HERALD_CLI_SCENARIO_H

#include <cstdint>
#include <optional>
#include <string>

#include "herald/runner.h"

namespace herald_cli {

enum class Format { Csv, Json };

/// One experiment read from a JSON scenario file.
///
///   {
///     "protocol": "double-herald",
///     "physical": {"eta": 0.9, "dark_count_prob": 0, "mismatch": 0.05,
///                  "g": 0.2, "kappa": 1, "t_wait": 50},
///     "inputs": {"prep": [[mu1, nu1], [mu2, nu2]], "encoded": [a0, a1],
///                "reduce_qubit": 1, "photons": 3, "amplitudes": [...],
///                "encoding": "polarization"},
///     "engine": {"mode": "exact" | "sample", "shots": 100000, "seed": 1,
///                "workers": 0},
///     "output": {"dir": "results", "format": "csv" | "json", "name": "run"},
///     "sweep": {"parameter": "eta", "values": [0.25, 0.5, 1.0]}
///   }
///
/// Complex numbers are a number or a [re, im] pair. Every section but
/// "protocol" is optional; cavity keys g, kappa, t_wait go together.
struct Scenario {
    herald::ProtocolKind protocol = herald::ProtocolKind::DoubleHerald;
    herald::ProtocolParams params;
    bool exact = true;
    herald::SampleOptions sampling;
    std::string out_dir = ".";
    Format format = Format::Csv;
    std::string name = "result";
    std::optional<herald::SweepParameter> sweep_parameter;
    std::vector<double> sweep_values;

    herald::SweepSpec sweep_spec() const;
};

/// Parses and validates. Errors are herald::ValidationError with the
/// offending field path in the message ("physical.eta: ...").
Scenario parse_scenario(const std::string &json_text);
Scenario load_scenario(const std::string &path);

Format parse_format(const std::string &text);

}  // namespace herald_cli

#endif
