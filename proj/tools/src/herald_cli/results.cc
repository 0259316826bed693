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

#include "herald_cli/results.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "herald/errors.h"
#include "json.hpp"

namespace herald_cli {

using herald::ValidationError;

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string render_csv(const std::vector<ResultRow> &rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto &r : rows) {
        out += r.parameter + "," + format_number(r.value) + "," + format_number(r.success_probability) + "," +
               format_number(r.success_fidelity) + "," +
               (r.stderr_probability ? format_number(*r.stderr_probability) : std::string()) + "\n";
    }
    return out;
}

namespace {

double parse_double(const std::string &field, std::size_t line) {
    try {
        std::size_t used = 0;
        double d = std::stod(field, &used);
        if (used != field.size()) {
            throw std::invalid_argument(field);
        }
        return d;
    } catch (const std::exception &) {
        throw ValidationError("csv line " + std::to_string(line) + ": '" + field + "' is not a number");
    }
}

}  // namespace

std::vector<ResultRow> parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ValidationError("csv header mismatch");
    }
    std::vector<ResultRow> rows;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (fields.size() != 5) {
            throw ValidationError("csv line " + std::to_string(n) + ": expected 5 fields");
        }
        ResultRow r;
        r.parameter = fields[0];
        r.value = parse_double(fields[1], n);
        r.success_probability = parse_double(fields[2], n);
        r.success_fidelity = parse_double(fields[3], n);
        if (!fields[4].empty()) {
            r.stderr_probability = parse_double(fields[4], n);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string render_json(
    const Scenario &scenario,
    const std::vector<ResultRow> &rows,
    const herald::BranchTree *tree,
    const herald::RunStats *stats) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["protocol"] = std::string(herald::protocol_name(scenario.protocol));
    doc["engine"] = scenario.exact ? "exact" : "sample";
    ordered_json jrows = ordered_json::array();
    for (const auto &r : rows) {
        ordered_json j;
        j["parameter"] = r.parameter;
        j["value"] = r.value;
        j["success_probability"] = r.success_probability;
        j["success_fidelity"] = r.success_fidelity;
        j["stderr"] = r.stderr_probability ? ordered_json(*r.stderr_probability) : ordered_json(nullptr);
        jrows.push_back(std::move(j));
    }
    doc["rows"] = std::move(jrows);
    if (stats) {
        ordered_json s;
        s["shots"] = stats->shots;
        s["successes"] = stats->successes;
        s["success_probability"] = stats->success_probability;
        s["stderr_probability"] = stats->stderr_probability;
        s["mean_fidelity"] = stats->mean_fidelity;
        s["stderr_fidelity"] = stats->stderr_fidelity;
        s["seed"] = stats->seed;
        doc["stats"] = std::move(s);
    }
    if (tree) {
        ordered_json leaves = ordered_json::array();
        for (const auto &l : tree->leaves) {
            ordered_json j;
            j["probability"] = l.probability;
            j["success"] = l.success;
            j["fidelity"] = l.fidelity;
            ordered_json heralds = ordered_json::array();
            for (const auto &h : l.herald_history) {
                ordered_json hj;
                hj["round"] = h.round;
                hj["clicks"] = h.clicks;
                heralds.push_back(std::move(hj));
            }
            j["herald_history"] = std::move(heralds);
            j["frame"] = l.frame.to_string();
            j["readout"] = l.readout;
            j["note"] = l.note;
            leaves.push_back(std::move(j));
        }
        doc["leaves"] = std::move(leaves);
    }
    return doc.dump(2) + "\n";
}

void write_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename onto " + target.string() + ": " + ec.message());
    }
}

}  // namespace herald_cli
