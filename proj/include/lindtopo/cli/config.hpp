// Copyright 2026 The lindtopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run configuration: flat `key = value` text, one experiment per file.
//
//   # comment
//   experiment = quench
//   initial.u1 = 1
//   final.u1   = 2.5
//
// Amplitudes accept a real number or a complex pair "(re,im)". Unknown keys,
// missing required keys and unparsable values raise ConfigError naming the key.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lindtopo/error.hpp"
#include "lindtopo/steady.hpp"
#include "lindtopo/types.hpp"

namespace lindtopo::cli {

/// Bad or missing configuration; `key()` names the offending entry (may be empty).
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what) : Error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class Experiment { Steady, PhaseDiagram, Quench, Spectrum };

inline std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::Steady: return "steady";
        case Experiment::PhaseDiagram: return "phase-diagram";
        case Experiment::Quench: return "quench";
        case Experiment::Spectrum: return "spectrum";
    }
    return "?";
}

inline std::optional<Experiment> parse_experiment(const std::string& s) {
    if (s == "steady") return Experiment::Steady;
    if (s == "phase-diagram") return Experiment::PhaseDiagram;
    if (s == "quench") return Experiment::Quench;
    if (s == "spectrum") return Experiment::Spectrum;
    return std::nullopt;
}

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

inline KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected `key = value`, got `" + line + "`");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, value).second) throw ConfigError(key, "duplicate key `" + key + "`");
    }
    return kv;
}

inline KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("", "cannot read config file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_key_values(ss.str());
}

/// Canonical text (sorted `key=value` lines) used for hashing.
inline std::string canonical_text(const KeyValues& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct RunConfig {
    Experiment experiment = Experiment::Steady;
    HamiltonianSpec hamiltonian;
    DissipatorSpec dissipator;  // steady
    DissipatorSpec initial;     // quench, spectrum
    DissipatorSpec final;       // quench, spectrum
    PhaseGrid grid;             // phase-diagram
    int n_sites = 2;
    Boundary boundary = Boundary::Periodic;
    real t_max = 0.5;
    real dt = 1e-3;
    real output_dt = 5e-3;  // spectrum sampling step
    int subsystem_first = 0;
    int subsystem_count = 0;  // 0: full system
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out = "out";
    KeyValues source;  // effective keys after overrides, for the manifest hash
};

namespace detail {

class Reader {
public:
    explicit Reader(const KeyValues& kv) : kv_(kv) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    const std::string& raw(const std::string& key) {
        used_.insert(key);
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError(key, "missing required key `" + key + "`");
        return it->second;
    }

    real number(const std::string& key) {
        const std::string& s = raw(key);
        std::size_t pos = 0;
        real v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty() || !std::isfinite(v))
            throw ConfigError(key, "key `" + key + "`: expected a finite number, got `" + s + "`");
        return v;
    }

    real number(const std::string& key, real fallback) { return has(key) ? number(key) : (used_.insert(key), fallback); }

    long integer(const std::string& key) {
        const std::string& s = raw(key);
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty())
            throw ConfigError(key, "key `" + key + "`: expected an integer, got `" + s + "`");
        return v;
    }

    long integer(const std::string& key, long fallback) { return has(key) ? integer(key) : fallback; }

    complex amplitude(const std::string& key) {
        const std::string& s = raw(key);
        if (!s.empty() && s.front() == '(') {
            std::istringstream in(s);
            complex z;
            in >> z;
            if (!in.fail() && (in >> std::ws).eof() && std::isfinite(z.real()) && std::isfinite(z.imag())) return z;
            throw ConfigError(key, "key `" + key + "`: expected a number or (re,im), got `" + s + "`");
        }
        return number(key);
    }

    std::string text(const std::string& key, const std::string& fallback) { return has(key) ? raw(key) : fallback; }

    void reject_unused() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) throw ConfigError(k, "unknown key `" + k + "`");
    }

private:
    const KeyValues& kv_;
    std::set<std::string> used_;
};

inline DissipatorSpec read_dissipator(Reader& r, const std::string& prefix) {
    DissipatorSpec d;
    d.u1 = r.amplitude(prefix + "u1");
    d.u2 = r.amplitude(prefix + "u2");
    d.v1 = r.amplitude(prefix + "v1");
    d.v2 = r.amplitude(prefix + "v2");
    return d;
}

inline void check(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, "key `" + key + "`: " + what);
}

}  // namespace detail

/// Builds a RunConfig for `experiment` from key-value pairs.
inline RunConfig make_config(Experiment experiment, const KeyValues& kv) {
    if (kv.empty()) throw ConfigError("", "empty configuration");
    detail::Reader r(kv);
    RunConfig c;
    c.experiment = experiment;
    c.source = kv;
    if (r.has("experiment")) {
        const std::string& e = r.raw("experiment");
        const auto parsed = parse_experiment(e);
        detail::check(parsed.has_value(), "experiment", "unknown experiment `" + e + "`");
        detail::check(*parsed == experiment, "experiment",
                      "config is for `" + e + "` but subcommand `" + to_string(experiment) + "` was run");
    }

    c.hamiltonian.J = r.number("J", 0.0);
    c.hamiltonian.delta = r.number("delta", 0.0);
    c.hamiltonian.mu = r.number("mu", 0.0);
    c.threads = static_cast<unsigned>(r.integer("threads", 1));
    detail::check(r.integer("threads", 1) >= 1, "threads", "must be at least 1");
    c.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
    c.out = r.text("out", "out");

    const std::string bc = r.text("boundary", "pbc");
    detail::check(bc == "pbc" || bc == "obc", "boundary", "expected pbc or obc, got `" + bc + "`");
    c.boundary = bc == "pbc" ? Boundary::Periodic : Boundary::Open;

    switch (experiment) {
        case Experiment::Steady:
            c.dissipator = detail::read_dissipator(r, "");
            break;
        case Experiment::PhaseDiagram:
            c.grid.u1_min = r.number("u1_min", c.grid.u1_min);
            c.grid.u1_max = r.number("u1_max", c.grid.u1_max);
            c.grid.u1_points = static_cast<int>(r.integer("u1_points", c.grid.u1_points));
            c.grid.u2_min = r.number("u2_min", c.grid.u2_min);
            c.grid.u2_max = r.number("u2_max", c.grid.u2_max);
            c.grid.u2_points = static_cast<int>(r.integer("u2_points", c.grid.u2_points));
            c.grid.v2_over_v1 = r.number("v2_over_v1", c.grid.v2_over_v1);
            c.grid.v1 = r.number("v1", c.grid.v1);
            detail::check(c.grid.u1_points >= 1, "u1_points", "must be at least 1");
            detail::check(c.grid.u2_points >= 1, "u2_points", "must be at least 1");
            detail::check(c.grid.v1 != 0.0, "v1", "must be nonzero");
            break;
        case Experiment::Quench:
        case Experiment::Spectrum:
            c.initial = detail::read_dissipator(r, "initial.");
            c.final = detail::read_dissipator(r, "final.");
            c.t_max = r.number("t_max", c.t_max);
            c.dt = r.number("dt", c.dt);
            detail::check(c.t_max > 0.0, "t_max", "must be positive");
            detail::check(c.dt > 0.0 && c.dt <= c.t_max, "dt", "must be positive and at most t_max");
            if (experiment == Experiment::Spectrum) {
                c.n_sites = static_cast<int>(r.integer("n_sites"));
                c.output_dt = r.number("output_dt", c.output_dt);
                c.subsystem_first = static_cast<int>(r.integer("subsystem_first", 0));
                c.subsystem_count = static_cast<int>(r.integer("subsystem_count", 0));
                detail::check(c.n_sites >= 2, "n_sites", "must be at least 2");
                detail::check(c.output_dt >= c.dt, "output_dt", "must be at least dt");
                detail::check(c.subsystem_count >= 0 && c.subsystem_first >= 0 &&
                                  c.subsystem_first + c.subsystem_count <= c.n_sites,
                              "subsystem_count", "site interval exceeds the chain");
            }
            break;
    }
    if (experiment != Experiment::Spectrum && r.has("n_sites")) c.n_sites = static_cast<int>(r.integer("n_sites"));
    detail::check(c.n_sites >= 2, "n_sites", "must be at least 2");
    r.reject_unused();

    for (DissipatorSpec* d : {&c.dissipator, &c.initial, &c.final}) {
        d->N = c.n_sites;
        d->boundary = c.boundary;
    }
    c.hamiltonian.N = c.n_sites;
    c.hamiltonian.boundary = c.boundary;
    return c;
}

}  // namespace lindtopo::cli
