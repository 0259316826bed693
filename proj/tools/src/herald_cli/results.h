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

#ifndef HERALD_CLI_RESULTS_H
#define HERALD_CLI_RESULTS_H

#include <optional>
#include <string>
#include <vector>

#include "herald/runner.h"
#include "herald_cli/scenario.h"

namespace herald_cli {

/// One line of the result table.
struct ResultRow {
    std::string parameter;
    double value = 0.0;
    double success_probability = 0.0;
    double success_fidelity = 0.0;
    std::optional<double> stderr_probability;
    bool operator==(const ResultRow &) const = default;
};

inline constexpr const char *kCsvHeader = "parameter,value,success_probability,success_fidelity,stderr";

/// 12 significant digits, "%.12g".
std::string format_number(double x);

std::string render_csv(const std::vector<ResultRow> &rows);
/// Inverse of render_csv; throws herald::ValidationError on schema mismatch.
std::vector<ResultRow> parse_csv(const std::string &text);

/// Result rows plus, when given, every enumerated leaf (herald history,
/// frame, readout) or the sampling statistics.
std::string render_json(
    const Scenario &scenario,
    const std::vector<ResultRow> &rows,
    const herald::BranchTree *tree,
    const herald::RunStats *stats);

/// Writes to a temporary file in the same directory, then renames it over
/// `path`.
void write_atomic(const std::string &path, const std::string &content);

}  // namespace herald_cli

#endif
