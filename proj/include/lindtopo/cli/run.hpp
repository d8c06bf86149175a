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

// Executes one experiment and writes its CSV tables, a JSON report and a
// run manifest into the output directory. Output is a pure function of the
// configuration: no timestamps, fixed row order, floats as %.17g.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lindtopo/cli/config.hpp"
#include "lindtopo/quench.hpp"
#include "lindtopo/realspace.hpp"
#include "lindtopo/steady.hpp"
#include "lindtopo/version.hpp"

namespace lindtopo::cli {

/// Verbosity from SIM_LOG: 0/quiet, 1/info (default), 2/debug.
class Logger {
public:
    explicit Logger(std::ostream& sink, int level = 1) : sink_(sink), level_(level) {}

    static int level_from_env() {
        const char* v = std::getenv("SIM_LOG");
        if (!v) return 1;
        const std::string s(v);
        if (s == "0" || s == "quiet" || s == "error") return 0;
        if (s == "2" || s == "debug") return 2;
        return 1;
    }

    void info(const std::string& msg) const {
        if (level_ >= 1) sink_ << "[info] " << msg << '\n';
    }
    void debug(const std::string& msg) const {
        if (level_ >= 2) sink_ << "[debug] " << msg << '\n';
    }

private:
    std::ostream& sink_;
    int level_;
};

inline std::string format_real(real v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal CSV writer; the header is fixed at construction.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : f_(path, std::ios::binary) {
        if (!f_) throw ConfigError("out", "cannot write " + path.string());
        f_ << header << '\n';
    }

    CsvWriter& operator<<(real v) { return field(format_real(v)); }
    CsvWriter& operator<<(int v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(long v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(const std::string& v) { return field(v); }
    void end_row() {
        f_ << '\n';
        first_ = true;
    }

private:
    CsvWriter& field(const std::string& s) {
        if (!first_) f_ << ',';
        f_ << s;
        first_ = false;
        return *this;
    }
    std::ofstream f_;
    bool first_ = true;
};

struct RunSummary {
    std::vector<std::string> files;
    nlohmann::ordered_json report;
};

namespace detail {

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("out", "cannot write " + path.string());
    f << j.dump(2) << '\n';
}

inline nlohmann::ordered_json json_real(real v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline nlohmann::ordered_json sign_pair_json(const PfaffianSignPair& p) {
    return {{"M0", p.M0}, {"Mpi", p.Mpi}, {"nu", p.nu}};
}

inline void write_transitions(const std::filesystem::path& dir, const TransitionReport& rep, RunSummary& s) {
    CsvWriter csv(dir / "transitions.csv", "ks,t_p,exists");
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const KsTransition& tr : rep.points) {
        csv << tr.ks << (tr.t_p ? *tr.t_p : std::nan("")) << (tr.exists ? 1 : 0);
        csv.end_row();
        list.push_back({{"ks", tr.ks},
                        {"exists", tr.exists},
                        {"t_p", tr.t_p ? json_real(*tr.t_p) : nullptr},
                        {"M_initial", tr.M_initial},
                        {"M_final", tr.M_final}});
    }
    s.files.push_back("transitions.csv");
    s.report["transitions"] = list;
    s.report["transition_count"] = rep.count;
}

inline QuenchPlan plan_of(const RunConfig& c) {
    QuenchPlan plan;
    plan.initial = c.initial;
    plan.final = c.final;
    plan.hamiltonian_initial = c.hamiltonian;
    plan.hamiltonian_final = c.hamiltonian;
    plan.t_max = c.t_max;
    plan.dt = c.dt;
    return plan;
}

inline void run_steady(const RunConfig& c, const Logger& log, RunSummary& s) {
    c.dissipator.validate();
    CsvWriter csv(c.out / "steady.csv", "ks,y,h0,pf,M");
    int M[2] = {0, 0};
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (int i = 0; i < 2; ++i) {
        const real ks = i == 0 ? 0.0 : pi;
        const HighSymmetryPoint p = steady_high_symmetry(c.dissipator, c.hamiltonian, ks);
        M[i] = m_sign(p.delta);
        csv << ks << p.y << p.h.h0 << p.pf << M[i];
        csv.end_row();
        const char* phase = p.regime.phase == PTPhase::Preserved ? "preserved"
                            : p.regime.phase == PTPhase::Broken  ? "broken"
                                                                 : "boundary";
        points.push_back({{"ks", ks}, {"pf_closed_form", steady_pf_closed(p.y, p.h.h0)}, {"pt_phase", phase}});
        log.debug("ks = " + format_real(ks) + ": y = " + format_real(p.y) + ", h0 = " + format_real(p.h.h0));
    }
    s.files.push_back("steady.csv");
    s.report["invariant"] = sign_pair_json(make_sign_pair(M[0], M[1]));
    s.report["points"] = points;
}

inline void run_phase_diagram(const RunConfig& c, const Logger& log, RunSummary& s) {
    const PhaseDiagram pd = phase_diagram(c.grid, c.hamiltonian, c.threads);
    CsvWriter csv(c.out / "phase_diagram.csv", "u1_over_v1,u2_over_v1,v2_over_v1,M0,Mpi,nu");
    long boundary = 0;
    for (const PhaseCell& cell : pd.cells) {
        csv << cell.u1_over_v1 << cell.u2_over_v1 << c.grid.v2_over_v1 << cell.signs.M0 << cell.signs.Mpi
            << cell.signs.nu;
        csv.end_row();
        boundary += cell.boundary ? 1 : 0;
    }
    log.info(std::to_string(pd.cells.size()) + " cells, " + std::to_string(boundary) + " on transition lines");
    s.files.push_back("phase_diagram.csv");
    s.report["cells"] = pd.cells.size();
    s.report["boundary_cells"] = boundary;
}

inline void run_quench(const RunConfig& c, const Logger& log, RunSummary& s) {
    const TransitionReport rep = critical_times(plan_of(c));
    CsvWriter csv(c.out / "quench.csv", "t,pf_k0,pf_kpi,nu");
    const NuTrace& tr = rep.nu_trace;
    for (std::size_t n = 0; n < tr.times.size(); ++n) {
        csv << tr.times[n] << tr.pf0[n] << tr.pfpi[n] << tr.nu[n];
        csv.end_row();
    }
    s.files.push_back("quench.csv");
    write_transitions(c.out, rep, s);
    s.report["nu_flips"] = count_flips(tr.nu);
    s.report["initial"] = sign_pair_json(steady_nu(c.initial));
    s.report["final"] = sign_pair_json(steady_nu(c.final));
    for (const KsTransition& t : rep.points)
        if (t.exists) log.info("transition at ks = " + format_real(t.ks) + ", t_p = " + format_real(*t.t_p));
}

inline void run_spectrum(const RunConfig& c, const Logger& log, RunSummary& s) {
    c.initial.validate();
    c.final.validate();
    // The Bloch prediction does not depend on N or boundary.
    QuenchPlan plan = plan_of(c);
    for (DissipatorSpec* d : {&plan.initial, &plan.final}) d->boundary = Boundary::Periodic;
    write_transitions(c.out, critical_times(plan), s);

    log.info("steady state of the initial dissipator, N = " + std::to_string(c.n_sites) + ", " +
             std::string(to_string(c.boundary)));
    const CorrelationMatrix delta0 = relaxed_realspace(c.hamiltonian, c.initial);
    const RealspaceGenerator gen = RealspaceGenerator::from_specs(c.hamiltonian, c.final);

    std::vector<real> times;
    const auto samples = static_cast<long>(std::floor(c.t_max / c.output_dt + 1e-9));
    for (long n = 0; n <= samples; ++n) times.push_back(static_cast<real>(n) * c.output_dt);
    EvolveOptions opt;
    opt.dt = c.dt;
    log.info("evolving to t = " + format_real(c.t_max) + " (" + std::to_string(times.size()) + " snapshots)");
    RealspaceTrajectory traj = evolve_delta(delta0, gen, times, opt);
    if (c.subsystem_count > 0)
        for (CorrelationMatrix& d : traj.states) d = restrict_to_sites(d, c.subsystem_first, c.subsystem_count);

    const SpesTrace trace = spes_trace(traj, c.threads);
    CsvWriter csv(c.out / "spes.csv", "t,index,epsilon");
    for (std::size_t n = 0; n < trace.times.size(); ++n)
        for (Eigen::Index i = 0; i < trace.spectra[n].size(); ++i) {
            csv << trace.times[n] << static_cast<long>(i) << trace.spectra[n](i);
            csv.end_row();
        }
    s.files.push_back("spes.csv");

    CsvWriter zm(c.out / "zero_modes.csv", "t,min_abs,second_abs,gap_ratio");
    for (const ZeroModeSample& z : zero_mode_diagnostics(trace)) {
        zm << z.t << z.min_abs << z.second_abs << z.gap_ratio;
        zm.end_row();
    }
    s.files.push_back("zero_modes.csv");
    s.report["snapshots"] = trace.times.size();
    s.report["subsystem"] = {{"first", c.subsystem_first}, {"count", c.subsystem_count}};
}

}  // namespace detail

inline std::string config_hash(const RunConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(to_string(c.experiment) + "\n" + canonical_text(c.source))));
    return buf;
}

/// Runs the configured experiment. Throws ConfigError, InvalidArgument or PhysicsError.
inline RunSummary run(const RunConfig& c, const Logger& log) {
    std::error_code ec;
    std::filesystem::create_directories(c.out, ec);
    if (ec || !std::filesystem::is_directory(c.out))
        throw ConfigError("out", "cannot create output directory " + c.out.string());

    RunSummary s;
    s.report["experiment"] = to_string(c.experiment);
    switch (c.experiment) {
        case Experiment::Steady: detail::run_steady(c, log, s); break;
        case Experiment::PhaseDiagram: detail::run_phase_diagram(c, log, s); break;
        case Experiment::Quench: detail::run_quench(c, log, s); break;
        case Experiment::Spectrum: detail::run_spectrum(c, log, s); break;
    }
    detail::write_json(c.out / "report.json", s.report);
    s.files.push_back("report.json");

    nlohmann::ordered_json manifest;
    manifest["experiment"] = to_string(c.experiment);
    manifest["config_hash"] = "fnv1a64:" + config_hash(c);
    manifest["library_version"] = version();
    manifest["seed"] = c.seed;
    manifest["config"] = c.source;
    manifest["outputs"] = s.files;
    detail::write_json(c.out / "manifest.json", manifest);
    s.files.push_back("manifest.json");
    log.info("wrote " + std::to_string(s.files.size()) + " files to " + c.out.string());
    return s;
}

}  // namespace lindtopo::cli
