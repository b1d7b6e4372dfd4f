// Copyright 2026 The vzsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vzsim/sweep.hpp"

using namespace vzsim;

namespace {

std::string g9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

std::string g6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

/// Render simple rational multiples of pi ("pi", "-pi/2", "3pi/4"); plain
/// radians otherwise.
std::string pretty_angle(double a) {
    const double r = a / kPi;
    for (const int den : {1, 2, 3, 4, 6}) {
        const double scaled = r * den;
        const long num = std::lround(scaled);
        if (std::fabs(scaled - static_cast<double>(num)) > 1e-9) continue;
        if (num == 0) return "0";
        const long g = std::gcd(std::labs(num), static_cast<long>(den));
        const long n = std::labs(num) / g, d = den / g;
        std::string s = num < 0 ? "-" : "";
        if (n != 1) s += std::to_string(n);
        s += "pi";
        if (d != 1) s += "/" + std::to_string(d);
        return s;
    }
    return g9(a);
}

bool near(double a, double b) { return std::fabs(a - b) <= 1e-12; }

std::string gate_str(const Gate &g) {
    if (const auto *z = std::get_if<VirtualZ>(&g)) return "Rz(" + pretty_angle(z->alpha) + ")";
    if (const auto *f = std::get_if<FreeEvolution>(&g))
        return "free(" + g9(f->duration_ns) + " ns)";
    const Rotation &r = std::get<PhysicalPulseGate>(g).rotation;
    if (near(r.phi, 0.0) && near(r.theta, kPi)) return "X";
    if (near(r.phi, 0.5 * kPi) && near(r.theta, kPi)) return "Y";
    if (near(r.phi, 0.0) && near(r.theta, 0.5 * kPi)) return "sqrt(X)";
    return "P(phi=" + pretty_angle(r.phi) + ", theta=" + pretty_angle(r.theta) + ")";
}

std::string gates_str(const GateSequence &s) {
    std::string out;
    for (size_t i = 0; i < s.gates.size(); ++i) {
        if (i) out += ", ";
        out += gate_str(s.gates[i]);
    }
    return out.empty() ? "(no gates)" : out;
}

struct SeqSpec {
    SequenceName name = SequenceName::XY4;
    CompilationStrategy strategy = CompilationStrategy::Symmetric;
    double multiplier = 1.0;
    std::string text;
};

/// NAME[:strategy][@multiplier], e.g. "XY4:asym@2".
SeqSpec parse_seqspec(const std::string &text) {
    SeqSpec sp;
    sp.text = text;
    std::string head = text;
    if (const auto at = head.find('@'); at != std::string::npos) {
        const std::string m = head.substr(at + 1);
        try {
            size_t used = 0;
            sp.multiplier = std::stod(m, &used);
            if (used != m.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception &) {
            throw std::invalid_argument("bad sequence spec \"" + text +
                                        "\": multiplier must be a number");
        }
        if (!(sp.multiplier > 0.0))
            throw std::invalid_argument("bad sequence spec \"" + text +
                                        "\": multiplier must be > 0");
        head = head.substr(0, at);
    }
    if (const auto colon = head.find(':'); colon != std::string::npos) {
        sp.strategy = parse_strategy(head.substr(colon + 1));
        head = head.substr(0, colon);
    }
    sp.name = parse_sequence_name(head);
    if (sp.name == SequenceName::FREE) sp.strategy = CompilationStrategy::Symmetric;
    return sp;
}

GateSequence repeat_cycles(const GateSequence &cycle, int cycles) {
    GateSequence out;
    out.name = cycle.name;
    for (int c = 0; c < cycles; ++c)
        out.gates.insert(out.gates.end(), cycle.gates.begin(), cycle.gates.end());
    return out;
}

PulseSchedule fold_spec(const SeqSpec &sp, int cycles, double tau_ns, double t_g_ns,
                        XbarVariant xbar) {
    const double interval = tau_ns * sp.multiplier;
    const GateSequence cycle = build_sequence(sp.name, sp.strategy, interval, xbar);
    return fold(repeat_cycles(cycle, cycles), ScheduleConfig{interval, t_g_ns});
}

std::string phases_str(const PulseSchedule &s) {
    std::string out = "[";
    for (size_t i = 0; i < s.pulses.size(); ++i) {
        if (i) out += ", ";
        out += pretty_angle(s.pulses[i].phase);
    }
    return out + "]";
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_report_table(const std::vector<CurveReport> &reports,
                        const std::vector<FidelityCurve> &curves) {
    std::cout << std::left << std::setw(28) << "curve" << std::right << std::setw(8) << "points"
              << std::setw(14) << "T_D_us" << std::setw(14) << "asymptote" << std::setw(14)
              << "osc_amp" << '\n';
    for (size_t i = 0; i < reports.size(); ++i) {
        const CurveReport &r = reports[i];
        std::cout << std::left << std::setw(28) << r.label << std::right << std::setw(8)
                  << curves[i].points.size();
        if (r.fit.converged)
            std::cout << std::setw(14) << g6(r.fit.T_D_us);
        else
            std::cout << std::setw(14) << "-";
        std::cout << std::setw(14) << g6(r.fit.a) << std::setw(14) << g6(r.osc.amplitude)
                  << '\n';
    }
}

std::vector<CurveReport> reports_for(const std::vector<FidelityCurve> &curves) {
    std::vector<CurveReport> reports;
    for (const auto &c : curves) {
        CurveReport rep;
        rep.label = c.label();
        if (c.points.size() >= 6) {
            rep.fit = fit_decay(c);
            try {
                rep.osc = oscillation_metric(c, rep.fit);
            } catch (const std::invalid_argument &) {
                rep.osc = OscillationMetric{0.0, 0.0};  // non-uniform grid
            }
        } else {
            rep.fit = DecayFit{0.0, 0.0, 0.0, 0.0, false};
        }
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{
        "vzsim: virtual-Z gate compilation and open-system simulation for a "
        "single driven qubit.\n"
        "Times are ns (decay times us), angles rad. Defaults for tau_ns and "
        "shots follow the experimental setup this models; all other defaults "
        "are modeling assumptions. Run manifests record which is which."};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVzsimVersion);

    // -- compile ------------------------------------------------------------
    auto *cmd_compile = app.add_subcommand(
        "compile", "Print the native-gate decomposition of a gate or one DD cycle");
    std::string compile_name;
    std::string compile_strategy = "sym";
    std::string compile_variant = "lead_plus_pi";
    double compile_tau = 56.8;
    cmd_compile->add_option("gate", compile_name, "Y, Xbar, or a sequence (XY4, UR4, YY, XXbar, FREE)")
        ->required();
    cmd_compile->add_option("--strategy", compile_strategy, "sym or asym")
        ->check(CLI::IsMember({"sym", "asym"}));
    cmd_compile->add_option("--xbar-variant", compile_variant, "Xbar decomposition variant")
        ->check(CLI::IsMember({"lead_plus_pi", "lead_minus_pi"}));
    cmd_compile->add_option("--tau", compile_tau, "pulse interval in ns [56.8]");

    // -- fold ---------------------------------------------------------------
    auto *cmd_fold = app.add_subcommand(
        "fold", "Fold virtual-Z frames through the pulses of a repeated cycle");
    std::string fold_spec_text;
    int fold_cycles = 1;
    double fold_tau = 56.8, fold_tg = -1.0;
    bool fold_json = false;
    cmd_fold->add_option("sequence", fold_spec_text, "NAME[:strategy][@multiplier]")->required();
    cmd_fold->add_option("--cycles", fold_cycles, "cycle repetitions [1]")
        ->check(CLI::PositiveNumber);
    cmd_fold->add_option("--tau", fold_tau, "pulse interval in ns [56.8]");
    cmd_fold->add_option("--t-g", fold_tg, "gate duration in ns [tau]");
    cmd_fold->add_flag("--json", fold_json, "machine-readable output");

    // -- equiv --------------------------------------------------------------
    auto *cmd_equiv = app.add_subcommand(
        "equiv", "Fold two sequences and test physical equivalence (exit 1 if they differ)");
    std::string equiv_a, equiv_b;
    int equiv_cycles = 1;
    double equiv_tau = 56.8, equiv_tg = -1.0;
    cmd_equiv->add_option("a", equiv_a, "NAME[:strategy][@multiplier]")->required();
    cmd_equiv->add_option("b", equiv_b, "NAME[:strategy][@multiplier]")->required();
    cmd_equiv->add_option("--cycles", equiv_cycles, "cycle repetitions [1]")
        ->check(CLI::PositiveNumber);
    cmd_equiv->add_option("--tau", equiv_tau, "pulse interval in ns [56.8]");
    cmd_equiv->add_option("--t-g", equiv_tg, "gate duration in ns [tau]");

    // -- simulate -----------------------------------------------------------
    auto *cmd_sim = app.add_subcommand(
        "simulate", "Integrate one compiled protocol under the noise model");
    std::string sim_spec_text, sim_initial = "plus_i", sim_config, sim_dump;
    int sim_cycles = 1, sim_shots = -1;
    uint64_t sim_seed = 0;
    bool sim_seed_given = false;
    cmd_sim->add_option("sequence", sim_spec_text, "NAME[:strategy][@multiplier]")->required();
    cmd_sim->add_option("--initial", sim_initial, "plus_i, minus_i, plus or zero [plus_i]");
    cmd_sim->add_option("--cycles", sim_cycles, "cycle repetitions [1]")
        ->check(CLI::NonNegativeNumber);
    cmd_sim->add_option("--config", sim_config, "experiment config supplying noise/numerics");
    cmd_sim->add_option("--shots", sim_shots, "sampled shots (0 = exact only) [config]");
    cmd_sim
        ->add_option_function<uint64_t>(
            "--seed",
            [&](uint64_t v) {
                sim_seed = v;
                sim_seed_given = true;
            },
            "RNG seed [config]")
        ->expected(1);
    cmd_sim->add_option("--dump-field", sim_dump,
                        "write the lowered drive field (t_ns,re,im CSV) to this path");

    // -- sweep --------------------------------------------------------------
    auto *cmd_sweep = app.add_subcommand(
        "sweep", "Run every curve in a config and write <output>.csv/.json");
    std::string sweep_config, sweep_out;
    bool sweep_stamp = false;
    cmd_sweep->add_option("config", sweep_config, "experiment config (JSON)")->required();
    cmd_sweep->add_option("--out", sweep_out, "output base path [config output_path]");
    cmd_sweep->add_flag("--stamp", sweep_stamp,
                        "embed the current UTC time in the manifest (off keeps reruns "
                        "byte-identical)");

    // -- fit ----------------------------------------------------------------
    auto *cmd_fit = app.add_subcommand("fit", "Re-fit decay curves from a results CSV");
    std::string fit_csv;
    cmd_fit->add_option("results", fit_csv, "CSV written by `vzsim sweep`")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_compile->parsed()) {
            const CompilationStrategy strat = parse_strategy(compile_strategy);
            const XbarVariant xbar = compile_variant == "lead_plus_pi" ? XbarVariant::LeadPlusPi
                                                                       : XbarVariant::LeadMinusPi;
            GateSequence seq;
            if (compile_name == "Y")
                seq = compile_y(strat);
            else if (compile_name == "Xbar")
                seq = compile_xbar(xbar);
            else
                seq = build_sequence(parse_sequence_name(compile_name), strat, compile_tau, xbar);
            std::cout << seq.name << ": " << gates_str(seq) << '\n';
            return 0;
        }

        if (cmd_fold->parsed()) {
            const SeqSpec sp = parse_seqspec(fold_spec_text);
            const double tg = fold_tg > 0.0 ? fold_tg : fold_tau;
            const PulseSchedule s =
                fold_spec(sp, fold_cycles, fold_tau, tg, XbarVariant::LeadPlusPi);
            if (fold_json) {
                nlohmann::ordered_json j;
                j["sequence"] = sp.text;
                j["cycles"] = fold_cycles;
                j["pulse_interval_ns"] = fold_tau * sp.multiplier;
                j["gate_duration_ns"] = tg;
                j["pulses"] = nlohmann::ordered_json::array();
                for (const auto &p : s.pulses)
                    j["pulses"].push_back({{"phase_rad", p.phase},
                                           {"angle_rad", p.angle},
                                           {"start_ns", p.start_ns},
                                           {"duration_ns", p.duration_ns}});
                j["residual_frame_rad"] = s.residual_frame;
                j["total_duration_ns"] = s.total_duration_ns;
                std::cout << j.dump(2) << '\n';
                return 0;
            }
            std::cout << "# " << sp.text << "  cycles=" << fold_cycles
                      << "  interval=" << g9(fold_tau * sp.multiplier) << " ns  t_g=" << g9(tg)
                      << " ns\n";
            std::cout << std::left << std::setw(6) << "idx" << std::setw(14) << "phase"
                      << std::setw(14) << "angle_rad" << std::setw(14) << "start_ns"
                      << std::setw(14) << "duration_ns" << '\n';
            for (size_t i = 0; i < s.pulses.size(); ++i)
                std::cout << std::left << std::setw(6) << i << std::setw(14)
                          << pretty_angle(s.pulses[i].phase) << std::setw(14)
                          << g9(s.pulses[i].angle) << std::setw(14) << g9(s.pulses[i].start_ns)
                          << std::setw(14) << g9(s.pulses[i].duration_ns) << '\n';
            std::cout << "residual_frame_rad " << pretty_angle(s.residual_frame) << '\n'
                      << "total_duration_ns  " << g9(s.total_duration_ns) << '\n';
            return 0;
        }

        if (cmd_equiv->parsed()) {
            const SeqSpec sa = parse_seqspec(equiv_a);
            const SeqSpec sb = parse_seqspec(equiv_b);
            const double tg = equiv_tg > 0.0 ? equiv_tg : equiv_tau;
            const PulseSchedule fa =
                fold_spec(sa, equiv_cycles, equiv_tau, tg, XbarVariant::LeadPlusPi);
            const PulseSchedule fb =
                fold_spec(sb, equiv_cycles, equiv_tau, tg, XbarVariant::LeadPlusPi);
            std::cout << "A: " << std::left << std::setw(14) << sa.text << fa.pulses.size()
                      << " pulses, phases " << phases_str(fa) << ", residual "
                      << pretty_angle(fa.residual_frame) << '\n';
            std::cout << "B: " << std::left << std::setw(14) << sb.text << fb.pulses.size()
                      << " pulses, phases " << phases_str(fb) << ", residual "
                      << pretty_angle(fb.residual_frame) << '\n';
            if (!physically_equivalent(fa, fb)) {
                std::cout << "NOT EQUIVALENT\n";
                return 1;
            }
            // The physical schedules agree; report the ideal-unitary global
            // phase between the two source sequences (e.g. XY4 = -UR4).
            const GateSequence ga = repeat_cycles(
                build_sequence(sa.name, sa.strategy, equiv_tau * sa.multiplier), equiv_cycles);
            const GateSequence gb = repeat_cycles(
                build_sequence(sb.name, sb.strategy, equiv_tau * sb.multiplier), equiv_cycles);
            const cplx phase = (ideal_unitary(ga).adjoint() * ideal_unitary(gb)).trace() * 0.5;
            std::string tag;
            if (std::abs(phase - 1.0) <= 1e-6)
                tag = "+1";
            else if (std::abs(phase + 1.0) <= 1e-6)
                tag = "-1";
            else
                tag = "e^{i " + g9(std::arg(phase)) + "}";
            std::cout << "EQUIVALENT (global phase " << tag << ")\n";
            return 0;
        }

        if (cmd_sim->parsed()) {
            ExperimentConfig cfg;
            if (!sim_config.empty()) cfg = load_config(sim_config);
            const SeqSpec sp = parse_seqspec(sim_spec_text);
            const InitialState init = parse_initial_state(sim_initial);
            const double interval = cfg.tau_ns * sp.multiplier;
            const GateSequence cycle =
                build_sequence(sp.name, sp.strategy, interval, cfg.xbar_variant);
            ProtocolOptions opt;
            opt.tau_ns = cfg.tau_ns;
            opt.t_g_ns = cfg.t_g_ns;
            opt.dt_ns = cfg.dt_ns;
            opt.spacing_multiplier = sp.multiplier;
            opt.shape = cfg.shape;
            opt.physical_prep = cfg.physical_prep;
            opt.xbar_variant = cfg.xbar_variant;
            const int shots = sim_shots >= 0 ? sim_shots : cfg.shots;
            const uint64_t seed = sim_seed_given ? sim_seed : cfg.seed;
            const ProtocolResult r =
                run_protocol(init, cycle, sim_cycles, cfg.noise, opt, shots, seed);
            std::cout << "sequence         " << sp.text << '\n'
                      << "initial_state    " << to_string(init) << '\n'
                      << "cycles           " << sim_cycles << '\n'
                      << "time_ns          "
                      << g9(sim_cycles * slots_per_cycle(sp.name) * interval) << '\n'
                      << "fidelity_exact   " << g9(r.fidelity_exact) << '\n';
            if (shots > 0)
                std::cout << "fidelity_sampled " << g9(r.fidelity_sampled) << "  (" << shots
                          << " shots, seed " << seed << ")\n";
            if (!sim_dump.empty()) {
                const PulseSchedule sched = fold(repeat_cycles(cycle, sim_cycles),
                                                 ScheduleConfig{interval, cfg.t_g_ns});
                const DriveField field =
                    lower(sched, cfg.shape, cfg.noise.interference, cfg.dt_ns);
                std::ofstream out(sim_dump);
                if (!out) throw std::runtime_error("cannot write field dump: " + sim_dump);
                out << "t_ns,re,im\n";
                for (size_t k = 0; k < field.samples.size(); ++k)
                    out << g9(0.5 * field.dt_ns * static_cast<double>(k)) << ','
                        << g9(field.samples[k].real()) << ',' << g9(field.samples[k].imag())
                        << '\n';
                std::cout << "drive field      " << sim_dump << "  (" << field.samples.size()
                          << " samples)\n";
            }
            return 0;
        }

        if (cmd_sweep->parsed()) {
            const ExperimentConfig cfg = load_config(sweep_config);
            const std::string base = sweep_out.empty() ? cfg.output_path : sweep_out;
            const SweepResult r = sweep_experiment(cfg);
            write_results(r.curves, r.reports, cfg, base,
                          sweep_stamp ? utc_timestamp() : std::string{});
            std::cout << "wrote " << base << ".csv and " << base << ".json\n";
            print_report_table(r.reports, r.curves);
            return 0;
        }

        if (cmd_fit->parsed()) {
            const std::vector<FidelityCurve> curves = read_results_csv(fit_csv);
            if (curves.empty()) throw std::runtime_error("no curves in " + fit_csv);
            print_report_table(reports_for(curves), curves);
            return 0;
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
