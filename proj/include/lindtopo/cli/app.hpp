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

// Command-line front end:
//
//   lindtopo-sim <steady|phase-diagram|quench|spectrum> --config FILE
//       [--out DIR] [--threads N] [--dt X] [--t-max X] [--n-sites N] [--boundary pbc|obc]
//
// Flags override the matching keys of the config file. Exit codes: 0 success,
// 1 configuration error, 2 physics-precondition error.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lindtopo/cli/config.hpp"
#include "lindtopo/cli/run.hpp"

namespace lindtopo::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kPhysicsError = 2 };

struct Overrides {
    std::optional<std::string> out, threads, dt, t_max, n_sites, boundary;

    void apply(KeyValues& kv) const {
        const std::pair<const char*, const std::optional<std::string>*> map[] = {
            {"out", &out}, {"threads", &threads}, {"dt", &dt}, {"t_max", &t_max}, {"n_sites", &n_sites},
            {"boundary", &boundary}};
        for (const auto& [key, value] : map)
            if (value->has_value()) kv[key] = **value;
    }
};

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian-state Lindblad dynamics and Z2 Pfaffian invariants", "lindtopo-sim"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    std::map<CLI::App*, Experiment> experiments;
    const std::pair<const char*, const char*> subs[] = {
        {"steady", "steady-state invariants at k = 0 and pi"},
        {"phase-diagram", "(M0, Mpi) over a (u1/v1, u2/v1) grid"},
        {"quench", "Pfaffian and nu(t) after a dissipative quench, with predicted transition times"},
        {"spectrum", "real-space evolution and single-particle entanglement spectrum"}};
    for (const auto& [name, help] : subs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--out", ov.out, "output directory");
        sub->add_option("--threads", ov.threads, "worker thread cap");
        sub->add_option("--dt", ov.dt, "integration step");
        sub->add_option("--t-max", ov.t_max, "final time");
        sub->add_option("--n-sites", ov.n_sites, "chain length");
        sub->add_option("--boundary", ov.boundary, "pbc or obc");
        experiments[sub] = *parse_experiment(name);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    CLI::App* sub = app.get_subcommands().front();
    const Experiment experiment = experiments.at(sub);
    const Logger log(err, Logger::level_from_env());
    try {
        KeyValues kv = config_path.empty() ? KeyValues{} : read_key_values(config_path);
        if (kv.empty()) {
            err << "error: " << (config_path.empty() ? "no --config given" : "config file is empty") << "\n\n"
                << sub->help();
            return kConfigError;
        }
        ov.apply(kv);
        const RunConfig cfg = make_config(experiment, kv);
        log.debug("config hash " + config_hash(cfg));
        run(cfg, log);
        return kSuccess;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const PhysicsError& e) {
        err << "physics error: " << e.what() << '\n';
        return kPhysicsError;
    }
}

}  // namespace lindtopo::cli
