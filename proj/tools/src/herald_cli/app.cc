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

#include "herald_cli/app.h"

#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "herald/errors.h"
#include "herald_cli/results.h"
#include "herald_cli/scenario.h"

namespace herald_cli {

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

void add_overrides(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--seed", o.seed, "Master seed (overrides engine.seed)");
    cmd->add_option("--shots", o.shots, "Monte Carlo shots (overrides engine.shots)");
    cmd->add_option("--out", o.out, "Output directory (overrides output.dir)");
    cmd->add_option("--format", o.format, "csv or json (overrides output.format)");
}

Scenario load_with_overrides(const std::string &path, const Overrides &o) {
    Scenario s = load_scenario(path);
    if (o.seed) {
        s.sampling.seed = *o.seed;
    }
    if (o.shots) {
        if (*o.shots == 0) {
            throw herald::ValidationError("--shots: must be at least 1");
        }
        s.sampling.shots = *o.shots;
    }
    if (o.out) {
        s.out_dir = *o.out;
    }
    if (o.format) {
        try {
            s.format = parse_format(*o.format);
        } catch (const herald::ValidationError &e) {
            throw herald::ValidationError(std::string("--format: ") + e.what());
        }
    }
    return s;
}

std::string output_path(const Scenario &s) {
    auto p = std::filesystem::path(s.out_dir) / (s.name + (s.format == Format::Csv ? ".csv" : ".json"));
    return p.string();
}

std::string do_run(const Scenario &s) {
    if (s.sweep_parameter) {
        throw herald::ValidationError("sweep: scenario has a sweep section; use the sweep verb");
    }
    auto tree = herald::enumerate(herald::build_protocol(s.protocol, s.params));
    ResultRow row{"eta", s.params.detector.efficiency, 0, 0, std::nullopt};
    std::optional<herald::RunStats> stats;
    if (s.exact) {
        row.success_probability = tree.success_probability();
        row.success_fidelity = tree.success_fidelity();
    } else {
        stats = herald::sample(tree, s.sampling);
        row.success_probability = stats->success_probability;
        row.success_fidelity = stats->mean_fidelity;
        row.stderr_probability = stats->stderr_probability;
    }
    std::vector<ResultRow> rows{row};
    auto path = output_path(s);
    write_atomic(
        path, s.format == Format::Csv ? render_csv(rows)
                                      : render_json(s, rows, s.exact ? &tree : nullptr, stats ? &*stats : nullptr));
    return path;
}

std::string do_sweep(const Scenario &s) {
    if (!s.sweep_parameter) {
        throw herald::ValidationError("sweep: missing sweep section");
    }
    auto spec = s.sweep_spec();
    std::vector<ResultRow> rows;
    for (const auto &r : herald::sweep(spec)) {
        rows.push_back({std::string(herald::to_string(spec.parameter)), r.value, r.success_probability,
                        r.success_fidelity, r.stderr_probability});
    }
    auto path = output_path(s);
    write_atomic(path, s.format == Format::Csv ? render_csv(rows) : render_json(s, rows, nullptr, nullptr));
    return path;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Heralded entanglement simulator"};
    app.name("herald");
    app.require_subcommand(1);

    Overrides run_o, sweep_o;
    std::string run_file, sweep_file, protocol_id;
    auto *run = app.add_subcommand("run", "Run one scenario and write its result table");
    run->add_option("scenario", run_file, "Scenario JSON file")->required();
    add_overrides(run, run_o);
    auto *sweep = app.add_subcommand("sweep", "Run a scenario over its sweep grid");
    sweep->add_option("scenario", sweep_file, "Scenario JSON file")->required();
    add_overrides(sweep, sweep_o);
    auto *describe = app.add_subcommand("describe", "Print a protocol's steps and inputs");
    describe->add_option("protocol", protocol_id, "Protocol id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "herald: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (describe->parsed()) {
            auto kind = herald::parse_protocol(protocol_id);
            if (!kind) {
                std::string known;
                for (auto k : herald::all_protocols()) {
                    known += (known.empty() ? "" : ", ") + std::string(herald::protocol_name(k));
                }
                err << "herald: unknown protocol '" << protocol_id << "' (known: " << known << ")\n";
                return kExitValidation;
            }
            out << herald::describe(*kind);
            return kExitOk;
        }
        std::string path = run->parsed() ? do_run(load_with_overrides(run_file, run_o))
                                         : do_sweep(load_with_overrides(sweep_file, sweep_o));
        out << path << "\n";
        return kExitOk;
    } catch (const std::invalid_argument &e) {
        err << "herald: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "herald: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace herald_cli
