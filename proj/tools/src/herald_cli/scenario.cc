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

#include "herald_cli/scenario.h"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "herald/errors.h"

namespace herald_cli {

using herald::Complex;
using herald::ValidationError;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &message) {
    throw ValidationError(path + ": " + message);
}

void check_keys(const json &obj, const std::string &path, std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto &[key, value] : obj.items()) {
        bool ok = false;
        for (const char *a : allowed) {
            ok |= key == a;
        }
        if (!ok) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

std::string join(const std::string &path, const char *key) {
    return path.empty() ? key : path + "." + key;
}

std::optional<double> number(const json &obj, const std::string &path, const char *key) {
    if (!obj.contains(key)) {
        return std::nullopt;
    }
    const auto &v = obj.at(key);
    if (!v.is_number()) {
        fail(join(path, key), "expected a number");
    }
    double d = v.get<double>();
    if (!std::isfinite(d)) {
        fail(join(path, key), "expected a finite number");
    }
    return d;
}

double in_range(double v, double lo, double hi, const std::string &path) {
    if (!(v >= lo && v <= hi)) {
        std::ostringstream msg;
        msg << "value " << v << " outside [" << lo << ", " << hi << "]";
        fail(path, msg.str());
    }
    return v;
}

std::optional<std::uint64_t> integer(const json &obj, const std::string &path, const char *key) {
    if (!obj.contains(key)) {
        return std::nullopt;
    }
    const auto &v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail(join(path, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::optional<std::string> text(const json &obj, const std::string &path, const char *key) {
    if (!obj.contains(key)) {
        return std::nullopt;
    }
    if (!obj.at(key).is_string()) {
        fail(join(path, key), "expected a string");
    }
    return obj.at(key).get<std::string>();
}

Complex complex_value(const json &v, const std::string &path) {
    if (v.is_number()) {
        return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    fail(path, "expected a number or a [re, im] pair");
}

std::vector<Complex> normalized_vector(const json &v, const std::string &path, std::size_t expected) {
    if (!v.is_array()) {
        fail(path, "expected an array");
    }
    if (expected != 0 && v.size() != expected) {
        fail(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(v.size()));
    }
    std::vector<Complex> out;
    double n = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(complex_value(v[i], path + "[" + std::to_string(i) + "]"));
        n += std::norm(out.back());
    }
    if (!std::isfinite(n) || n <= 0) {
        fail(path, "amplitudes must be finite and not all zero");
    }
    for (auto &a : out) {
        a /= std::sqrt(n);
    }
    return out;
}

void parse_physical(const json &obj, Scenario &s) {
    const std::string path = "physical";
    check_keys(obj, path, {"g", "kappa", "t_wait", "eta", "dark_count_prob", "mismatch"});
    if (auto v = number(obj, path, "eta")) {
        s.params.detector.efficiency = in_range(*v, 0, 1, "physical.eta");
    }
    if (auto v = number(obj, path, "dark_count_prob")) {
        s.params.detector.dark_count_prob = in_range(*v, 0, 1, "physical.dark_count_prob");
    }
    if (auto v = number(obj, path, "mismatch")) {
        if (!(*v > -1)) {
            fail("physical.mismatch", "must be greater than -1");
        }
        s.params.mismatch = *v;
    }
    auto g = number(obj, path, "g");
    auto kappa = number(obj, path, "kappa");
    auto t_wait = number(obj, path, "t_wait");
    if (g || kappa || t_wait) {
        if (!g || !kappa || !t_wait) {
            fail(std::string("physical.") + (!g ? "g" : !kappa ? "kappa" : "t_wait"),
                 "cavity parameters g, kappa and t_wait must be given together");
        }
        if (*g < 0) {
            fail("physical.g", "must be non-negative");
        }
        if (!(*kappa > 0)) {
            fail("physical.kappa", "must be positive");
        }
        if (*t_wait < 0) {
            fail("physical.t_wait", "must be non-negative");
        }
        if (*g > *kappa) {
            fail("physical.g", "exceeds kappa; the slow emission rate needs g <= kappa");
        }
        s.params.cavity = herald::CavityParams{*g, *kappa, *t_wait};
    }
}

void parse_inputs(const json &obj, Scenario &s) {
    const std::string path = "inputs";
    check_keys(obj, path, {"prep", "encoded", "reduce_qubit", "photons", "amplitudes", "encoding"});
    if (obj.contains("prep")) {
        const auto &prep = obj.at("prep");
        if (!prep.is_array() || prep.empty() || prep.size() > 2) {
            fail("inputs.prep", "expected one or two [mu, nu] pairs");
        }
        for (std::size_t j = 0; j < prep.size(); ++j) {
            auto v = normalized_vector(prep[j], "inputs.prep[" + std::to_string(j) + "]", 2);
            s.params.preps[j] = {v[0], v[1]};
        }
    }
    if (obj.contains("encoded")) {
        auto v = normalized_vector(obj.at("encoded"), "inputs.encoded", 2);
        s.params.encoded = {v[0], v[1]};
    }
    if (auto q = integer(obj, path, "reduce_qubit")) {
        if (*q > 1) {
            fail("inputs.reduce_qubit", "must be 0 or 1");
        }
        s.params.reduce_qubit = *q;
    }
    auto encoding = s.params.multiphoton.encoding;
    if (auto e = text(obj, path, "encoding")) {
        try {
            encoding = herald::parse_encoding(*e);
        } catch (const ValidationError &) {
            fail("inputs.encoding", "unknown encoding '" + *e + "' (time-bin, dual-rail, polarization)");
        }
        s.params.pair_encoding = encoding;
    }
    auto photons = integer(obj, path, "photons");
    if (photons && (*photons < 1 || *photons > 30)) {
        fail("inputs.photons", "must be between 1 and 30");
    }
    if (obj.contains("amplitudes")) {
        const auto &a = obj.at("amplitudes");
        std::size_t expected = photons ? std::size_t{1} << *photons : 0;
        auto v = normalized_vector(a, "inputs.amplitudes", expected);
        std::size_t n = 0;
        while ((std::size_t{1} << n) < v.size()) {
            ++n;
        }
        if ((std::size_t{1} << n) != v.size() || n == 0) {
            fail("inputs.amplitudes", "length must be 2^N with N >= 1");
        }
        s.params.multiphoton.photons = n;
        s.params.multiphoton.amplitudes = std::move(v);
        s.params.multiphoton.encoding = encoding;
    } else {
        s.params.multiphoton = herald::MultiPhotonSpec::ghz(photons ? *photons : s.params.multiphoton.photons, encoding);
    }
}

void parse_engine(const json &obj, Scenario &s) {
    const std::string path = "engine";
    check_keys(obj, path, {"mode", "shots", "seed", "workers"});
    if (auto m = text(obj, path, "mode")) {
        if (*m == "exact") {
            s.exact = true;
        } else if (*m == "sample") {
            s.exact = false;
        } else {
            fail("engine.mode", "expected 'exact' or 'sample'");
        }
    }
    if (auto v = integer(obj, path, "shots")) {
        if (*v == 0) {
            fail("engine.shots", "must be at least 1");
        }
        s.sampling.shots = *v;
    }
    if (auto v = integer(obj, path, "seed")) {
        s.sampling.seed = *v;
    }
    if (auto v = integer(obj, path, "workers")) {
        s.sampling.workers = static_cast<unsigned>(*v);
    }
}

void parse_output(const json &obj, Scenario &s) {
    const std::string path = "output";
    check_keys(obj, path, {"dir", "format", "name"});
    if (auto d = text(obj, path, "dir")) {
        s.out_dir = *d;
    }
    if (auto f = text(obj, path, "format")) {
        try {
            s.format = parse_format(*f);
        } catch (const ValidationError &e) {
            fail("output.format", e.what());
        }
    }
    if (auto n = text(obj, path, "name")) {
        if (n->empty() || n->find('/') != std::string::npos) {
            fail("output.name", "must be a non-empty file stem without '/'");
        }
        s.name = *n;
    }
}

void parse_sweep(const json &obj, Scenario &s) {
    const std::string path = "sweep";
    check_keys(obj, path, {"parameter", "values"});
    auto p = text(obj, path, "parameter");
    if (!p) {
        fail("sweep.parameter", "missing");
    }
    try {
        s.sweep_parameter = herald::parse_sweep_parameter(*p);
    } catch (const ValidationError &) {
        fail("sweep.parameter", "unknown parameter '" + *p + "' (eta, g, kappa, mismatch, photons)");
    }
    if (!obj.contains("values") || !obj.at("values").is_array()) {
        fail("sweep.values", "expected an array of numbers");
    }
    for (std::size_t i = 0; i < obj.at("values").size(); ++i) {
        const auto &v = obj.at("values")[i];
        if (!v.is_number()) {
            fail("sweep.values[" + std::to_string(i) + "]", "expected a number");
        }
        s.sweep_values.push_back(v.get<double>());
    }
    if (s.sweep_values.empty()) {
        fail("sweep.values", "grid is empty");
    }
}

}  // namespace

herald::SweepSpec Scenario::sweep_spec() const {
    herald::SweepSpec spec;
    spec.protocol = protocol;
    spec.base = params;
    spec.parameter = sweep_parameter.value_or(herald::SweepParameter::Eta);
    spec.values = sweep_values;
    spec.exact = exact;
    spec.sampling = sampling;
    return spec;
}

Format parse_format(const std::string &text) {
    if (text == "csv") {
        return Format::Csv;
    }
    if (text == "json") {
        return Format::Json;
    }
    throw ValidationError("unknown format '" + text + "' (csv, json)");
}

Scenario parse_scenario(const std::string &json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    check_keys(doc, "", {"protocol", "physical", "inputs", "engine", "output", "sweep"});
    Scenario s;
    auto id = text(doc, "", "protocol");
    if (!id) {
        fail("protocol", "missing");
    }
    auto kind = herald::parse_protocol(*id);
    if (!kind) {
        fail("protocol", "unknown protocol '" + *id + "'");
    }
    s.protocol = *kind;
    if (doc.contains("physical")) {
        parse_physical(doc.at("physical"), s);
    }
    if (doc.contains("inputs")) {
        parse_inputs(doc.at("inputs"), s);
    }
    if (doc.contains("engine")) {
        parse_engine(doc.at("engine"), s);
    }
    if (doc.contains("output")) {
        parse_output(doc.at("output"), s);
    }
    if (doc.contains("sweep")) {
        parse_sweep(doc.at("sweep"), s);
    }
    try {
        s.params.validate(s.protocol);
    } catch (const ValidationError &e) {
        fail("scenario", e.what());
    }
    return s;
}

Scenario load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(path + ": cannot read scenario file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace herald_cli
