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

#include "vzsim/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vzsim {
namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string &path, const std::string &what) {
    throw std::invalid_argument("config: " + (path.empty() ? "(top level)" : path) + ": " + what);
}

std::string join(const std::string &parent, const std::string &key) {
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown_keys(const ojson &obj, const std::string &path,
                         std::initializer_list<const char *> allowed) {
    for (const auto &el : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char *k) { return el.key() == k; });
        if (!known) fail(join(path, el.key()), "unknown key");
    }
}

double get_number(const ojson &j, const std::string &path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double get_positive(const ojson &j, const std::string &path) {
    const double x = get_number(j, path);
    if (!(x > 0.0) || !std::isfinite(x)) fail(path, "expected a positive finite number");
    return x;
}

double get_nonnegative(const ojson &j, const std::string &path) {
    const double x = get_number(j, path);
    if (!(x >= 0.0) || !std::isfinite(x)) fail(path, "expected a number >= 0");
    return x;
}

/// T1/Tphi style: null disables the channel (infinite time).
double get_time_or_null(const ojson &j, const std::string &path) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    const double x = get_number(j, path);
    if (!(x > 0.0)) fail(path, "expected a positive number of microseconds, or null to disable");
    return x;
}

int64_t get_integer(const ojson &j, const std::string &path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int64_t>();
}

std::string get_string(const ojson &j, const std::string &path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

template <typename Fn>
void parse_enum(const ojson &j, const std::string &path, Fn &&parse) {
    try {
        parse(get_string(j, path));
    } catch (const std::invalid_argument &e) {
        // Re-raise parser messages ("unknown sequence name: ..") with the
        // field path attached.
        const std::string msg = e.what();
        if (msg.rfind("config:", 0) == 0) throw;
        fail(path, msg);
    }
}

InterferenceModel parse_interference(const ojson &j, const std::string &path, double t_g_ns) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find("model");
    if (it == j.end()) fail(join(path, "model"), "required");
    const std::string model = get_string(*it, join(path, "model"));
    if (model == "none") {
        reject_unknown_keys(j, path, {"model"});
        return NoInterference{};
    }
    if (model == "tail_overlap") {
        reject_unknown_keys(j, path, {"model", "extension_ns"});
        TailOverlap t{0.5 * t_g_ns};
        if (j.contains("extension_ns"))
            t.extension_ns = get_nonnegative(j["extension_ns"], join(path, "extension_ns"));
        return t;
    }
    if (model == "echo") {
        reject_unknown_keys(j, path, {"model", "reflection_amplitude", "delay_ns",
                                      "phase_shift_rad"});
        EchoReflection e{0.1, 10.0, 0.0};
        if (j.contains("reflection_amplitude"))
            e.reflection_amplitude =
                get_nonnegative(j["reflection_amplitude"], join(path, "reflection_amplitude"));
        if (j.contains("delay_ns"))
            e.delay_ns = get_positive(j["delay_ns"], join(path, "delay_ns"));
        if (j.contains("phase_shift_rad"))
            e.phase_shift_rad = get_number(j["phase_shift_rad"], join(path, "phase_shift_rad"));
        return e;
    }
    fail(join(path, "model"), "expected \"none\", \"tail_overlap\" or \"echo\", got \"" + model +
                                  "\"");
}

std::string format_g9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

ojson interference_to_json(const InterferenceModel &m) {
    ojson j;
    if (std::holds_alternative<NoInterference>(m)) {
        j["model"] = "none";
    } else if (const auto *t = std::get_if<TailOverlap>(&m)) {
        j["model"] = "tail_overlap";
        j["extension_ns"] = t->extension_ns;
    } else {
        const auto &e = std::get<EchoReflection>(m);
        j["model"] = "echo";
        j["reflection_amplitude"] = e.reflection_amplitude;
        j["delay_ns"] = e.delay_ns;
        j["phase_shift_rad"] = e.phase_shift_rad;
    }
    return j;
}

ojson envelope_to_json(const PulseShape &shape) {
    ojson j;
    if (const auto *g = std::get_if<GaussianEnvelope>(&shape.envelope)) {
        j["shape"] = "gaussian";
        j["sigma_ns"] = g->sigma_ns;
        j["truncation_window_ns"] = g->truncation_window_ns;
    } else {
        j["shape"] = "cosine_ramp";
    }
    return j;
}

}  // namespace

std::vector<int> default_cycle_grid() {
    std::vector<int> grid;
    for (int c = 8; c <= 320; c += 8) grid.push_back(c);
    return grid;
}

ExperimentConfig parse_config(const std::string &json_text) {
    ojson root;
    try {
        root = ojson::parse(json_text);
    } catch (const ojson::parse_error &e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) fail("", "top level must be a JSON object");
    reject_unknown_keys(root, "",
                        {"sequences", "spacing_multipliers", "tau_ns", "t_g_ns", "cycle_counts",
                         "initial_states", "noise", "shots", "seed", "dt_ns", "output_path",
                         "envelope", "physical_prep", "xbar_variant"});

    ExperimentConfig cfg;

    if (!root.contains("sequences")) fail("sequences", "required");
    {
        const ojson &seqs = root["sequences"];
        if (!seqs.is_array() || seqs.empty()) fail("sequences", "expected a non-empty array");
        cfg.sequences.clear();
        for (size_t i = 0; i < seqs.size(); ++i) {
            const std::string base = "sequences[" + std::to_string(i) + "]";
            const ojson &s = seqs[i];
            if (!s.is_object()) fail(base, "expected an object {\"name\", \"strategy\"}");
            reject_unknown_keys(s, base, {"name", "strategy"});
            if (!s.contains("name")) fail(join(base, "name"), "required");
            SequenceChoice choice{SequenceName::XY4, CompilationStrategy::Symmetric};
            parse_enum(s["name"], join(base, "name"),
                       [&](const std::string &v) { choice.name = parse_sequence_name(v); });
            if (s.contains("strategy"))
                parse_enum(s["strategy"], join(base, "strategy"),
                           [&](const std::string &v) { choice.strategy = parse_strategy(v); });
            if (choice.strategy == CompilationStrategy::Asymmetric &&
                (choice.name == SequenceName::UR4 || choice.name == SequenceName::XXbar))
                fail(join(base, "strategy"),
                     to_string(choice.name) + " has a single correct construction; use \"sym\"");
            // FREE has no pulses to compile; normalize so round trips are
            // stable.
            if (choice.name == SequenceName::FREE)
                choice.strategy = CompilationStrategy::Symmetric;
            cfg.sequences.push_back(choice);
        }
    }

    if (root.contains("spacing_multipliers")) {
        const ojson &arr = root["spacing_multipliers"];
        if (!arr.is_array() || arr.empty())
            fail("spacing_multipliers", "expected a non-empty array");
        cfg.spacing_multipliers.clear();
        for (size_t i = 0; i < arr.size(); ++i)
            cfg.spacing_multipliers.push_back(
                get_positive(arr[i], "spacing_multipliers[" + std::to_string(i) + "]"));
    }

    if (root.contains("tau_ns")) cfg.tau_ns = get_positive(root["tau_ns"], "tau_ns");
    const bool t_g_given = root.contains("t_g_ns");
    cfg.t_g_ns = t_g_given ? get_positive(root["t_g_ns"], "t_g_ns") : cfg.tau_ns;
    if (cfg.tau_ns < cfg.t_g_ns) {
        std::ostringstream os;
        os << "pulses must fit the interval: tau_ns (" << cfg.tau_ns << ") < t_g_ns ("
           << cfg.t_g_ns << ")";
        fail("tau_ns", os.str());
    }

    if (root.contains("cycle_counts")) {
        const ojson &arr = root["cycle_counts"];
        if (!arr.is_array() || arr.empty()) fail("cycle_counts", "expected a non-empty array");
        cfg.cycle_counts.clear();
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string p = "cycle_counts[" + std::to_string(i) + "]";
            const int64_t c = get_integer(arr[i], p);
            if (c < 1) fail(p, "expected a cycle count >= 1");
            if (!cfg.cycle_counts.empty() && c <= cfg.cycle_counts.back())
                fail(p, "cycle counts must be strictly increasing");
            cfg.cycle_counts.push_back(static_cast<int>(c));
        }
    }

    if (root.contains("initial_states")) {
        const ojson &arr = root["initial_states"];
        if (!arr.is_array() || arr.empty()) fail("initial_states", "expected a non-empty array");
        cfg.initial_states.clear();
        for (size_t i = 0; i < arr.size(); ++i)
            parse_enum(arr[i], "initial_states[" + std::to_string(i) + "]",
                       [&](const std::string &v) {
                           cfg.initial_states.push_back(parse_initial_state(v));
                       });
    }

    // Defaults resolved against the final t_g.
    cfg.noise.interference = TailOverlap{0.5 * cfg.t_g_ns};
    if (root.contains("noise")) {
        const ojson &n = root["noise"];
        if (!n.is_object()) fail("noise", "expected an object");
        reject_unknown_keys(n, "noise",
                            {"T1_us", "Tphi_us", "delta_theta_rad", "delta_phi_rad",
                             "quasistatic_sigma_rad_per_ns", "interference"});
        if (n.contains("T1_us")) cfg.noise.T1_us = get_time_or_null(n["T1_us"], "noise.T1_us");
        if (n.contains("Tphi_us"))
            cfg.noise.Tphi_us = get_time_or_null(n["Tphi_us"], "noise.Tphi_us");
        if (n.contains("delta_theta_rad"))
            cfg.noise.delta_theta_rad = get_number(n["delta_theta_rad"], "noise.delta_theta_rad");
        if (n.contains("delta_phi_rad"))
            cfg.noise.delta_phi_rad = get_number(n["delta_phi_rad"], "noise.delta_phi_rad");
        if (n.contains("quasistatic_sigma_rad_per_ns"))
            cfg.noise.quasistatic_sigma = get_nonnegative(n["quasistatic_sigma_rad_per_ns"],
                                                          "noise.quasistatic_sigma_rad_per_ns");
        if (n.contains("interference"))
            cfg.noise.interference =
                parse_interference(n["interference"], "noise.interference", cfg.t_g_ns);
    }

    if (root.contains("shots")) {
        const int64_t s = get_integer(root["shots"], "shots");
        if (s < 0) fail("shots", "expected a count >= 0");
        cfg.shots = static_cast<int>(s);
    }
    if (root.contains("seed")) {
        const ojson &s = root["seed"];
        if (!s.is_number_integer() && !s.is_number_unsigned())
            fail("seed", "expected an integer");
        if (s.is_number_integer() && s.get<int64_t>() < 0)
            fail("seed", "expected a non-negative integer");
        cfg.seed = s.get<uint64_t>();
    }
    if (root.contains("dt_ns")) cfg.dt_ns = get_positive(root["dt_ns"], "dt_ns");
    if (root.contains("output_path")) {
        cfg.output_path = get_string(root["output_path"], "output_path");
        if (cfg.output_path.empty()) fail("output_path", "expected a non-empty path");
    }

    cfg.shape = PulseShape::gaussian(cfg.t_g_ns);
    if (root.contains("envelope")) {
        const ojson &env = root["envelope"];
        if (!env.is_object()) fail("envelope", "expected an object");
        const auto it = env.find("shape");
        if (it == env.end()) fail("envelope.shape", "required");
        const std::string shape = get_string(*it, "envelope.shape");
        if (shape == "gaussian") {
            reject_unknown_keys(env, "envelope", {"shape", "sigma_ns", "truncation_window_ns"});
            GaussianEnvelope g{cfg.t_g_ns / 4.0, cfg.t_g_ns / 2.0};
            if (env.contains("sigma_ns"))
                g.sigma_ns = get_positive(env["sigma_ns"], "envelope.sigma_ns");
            if (env.contains("truncation_window_ns"))
                g.truncation_window_ns =
                    get_positive(env["truncation_window_ns"], "envelope.truncation_window_ns");
            cfg.shape = PulseShape{cfg.t_g_ns, g};
        } else if (shape == "cosine_ramp") {
            reject_unknown_keys(env, "envelope", {"shape"});
            cfg.shape = PulseShape::cosine_ramp(cfg.t_g_ns);
        } else {
            fail("envelope.shape",
                 "expected \"gaussian\" or \"cosine_ramp\", got \"" + shape + "\"");
        }
    }
    if (const auto *g = std::get_if<GaussianEnvelope>(&cfg.shape.envelope)) {
        if (g->sigma_ns / cfg.dt_ns < 10.0)
            fail("dt_ns", "must resolve the Gaussian sigma with >= 10 samples "
                          "(sigma_ns / dt_ns >= 10)");
    }

    if (root.contains("physical_prep")) {
        if (!root["physical_prep"].is_boolean()) fail("physical_prep", "expected a boolean");
        cfg.physical_prep = root["physical_prep"].get<bool>();
    }
    if (root.contains("xbar_variant")) {
        const std::string v = get_string(root["xbar_variant"], "xbar_variant");
        if (v == "lead_plus_pi")
            cfg.xbar_variant = XbarVariant::LeadPlusPi;
        else if (v == "lead_minus_pi")
            cfg.xbar_variant = XbarVariant::LeadMinusPi;
        else
            fail("xbar_variant",
                 "expected \"lead_plus_pi\" or \"lead_minus_pi\", got \"" + v + "\"");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument(std::string(e.what()) + " [" + path + "]");
    }
}

std::string config_to_json(const ExperimentConfig &cfg) {
    ojson j;
    j["sequences"] = ojson::array();
    for (const auto &s : cfg.sequences) {
        ojson e;
        e["name"] = to_string(s.name);
        if (s.name != SequenceName::FREE) e["strategy"] = to_string(s.strategy);
        j["sequences"].push_back(e);
    }
    j["spacing_multipliers"] = cfg.spacing_multipliers;
    j["tau_ns"] = cfg.tau_ns;
    j["t_g_ns"] = cfg.t_g_ns;
    j["cycle_counts"] = cfg.cycle_counts;
    j["initial_states"] = ojson::array();
    for (const auto s : cfg.initial_states) j["initial_states"].push_back(to_string(s));
    ojson noise;
    noise["T1_us"] = std::isinf(cfg.noise.T1_us) ? ojson(nullptr) : ojson(cfg.noise.T1_us);
    noise["Tphi_us"] = std::isinf(cfg.noise.Tphi_us) ? ojson(nullptr) : ojson(cfg.noise.Tphi_us);
    noise["delta_theta_rad"] = cfg.noise.delta_theta_rad;
    noise["delta_phi_rad"] = cfg.noise.delta_phi_rad;
    noise["quasistatic_sigma_rad_per_ns"] = cfg.noise.quasistatic_sigma;
    noise["interference"] = interference_to_json(cfg.noise.interference);
    j["noise"] = noise;
    j["envelope"] = envelope_to_json(cfg.shape);
    j["shots"] = cfg.shots;
    j["seed"] = cfg.seed;
    j["dt_ns"] = cfg.dt_ns;
    j["physical_prep"] = cfg.physical_prep;
    j["xbar_variant"] =
        cfg.xbar_variant == XbarVariant::LeadPlusPi ? "lead_plus_pi" : "lead_minus_pi";
    j["output_path"] = cfg.output_path;
    return j.dump(2) + "\n";
}

void save_config(const ExperimentConfig &cfg, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << config_to_json(cfg);
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string manifest_json(const ExperimentConfig &cfg, const std::string &timestamp) {
    ojson m;
    m["tool"] = "vzsim";
    m["version"] = kVzsimVersion;
    m["timestamp"] = timestamp.empty() ? ojson(nullptr) : ojson(timestamp);
    m["config"] = ojson::parse(config_to_json(cfg));
    // Which defaults come from the experimental setup this models and
    // which are modeling assumptions (the source experiment does not
    // report them).
    ojson prov;
    prov["tau_ns"] = "experiment";
    prov["shots"] = "experiment";
    prov["t_g_ns"] = "assumed";
    prov["dt_ns"] = "assumed";
    prov["noise.T1_us"] = "assumed";
    prov["noise.Tphi_us"] = "assumed";
    prov["noise.delta_theta_rad"] = "assumed";
    prov["noise.delta_phi_rad"] = "assumed";
    prov["noise.quasistatic_sigma_rad_per_ns"] = "assumed";
    prov["noise.interference"] = "assumed";
    prov["envelope"] = "assumed";
    m["defaults_provenance"] = prov;
    return m.dump(2) + "\n";
}

void write_results(const std::vector<FidelityCurve> &curves,
                   const std::vector<CurveReport> &reports, const ExperimentConfig &cfg,
                   const std::string &base_path, const std::string &timestamp) {
    const std::string csv_path = base_path + ".csv";
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write results: " + csv_path);
    csv << "sequence,strategy,spacing_multiplier,cycles,time_ns,fidelity_exact,"
           "fidelity_sampled,shots,seed,initial_state\n";
    for (const auto &c : curves) {
        for (const auto &p : c.points) {
            csv << to_string(c.sequence) << ',' << c.strategy_label() << ','
                << format_g9(c.spacing_multiplier) << ',' << p.cycles << ','
                << format_g9(p.time_ns) << ',' << format_g9(p.fidelity_exact) << ','
                << format_g9(p.fidelity_sampled) << ',' << p.shots << ',' << p.seed << ','
                << to_string(c.initial_state) << '\n';
        }
    }
    if (!csv) throw std::runtime_error("write failed: " + csv_path);
    csv.close();

    ojson side;
    side["manifest"] = ojson::parse(manifest_json(cfg, timestamp));
    side["fits"] = ojson::array();
    for (const auto &r : reports) {
        ojson f;
        f["label"] = r.label;
        f["a"] = r.fit.a;
        f["b"] = r.fit.b;
        f["T_D_us"] = r.fit.T_D_us;
        f["rms_residual"] = r.fit.rms_residual;
        f["converged"] = r.fit.converged;
        f["osc_amplitude"] = r.osc.amplitude;
        f["osc_period_ns"] = r.osc.period_ns;
        side["fits"].push_back(f);
    }
    const std::string json_path = base_path + ".json";
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("cannot write results: " + json_path);
    js << side.dump(2) << "\n";
    if (!js) throw std::runtime_error("write failed: " + json_path);
}

std::vector<FidelityCurve> read_results_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty results file: " + path);
    const std::string expected =
        "sequence,strategy,spacing_multiplier,cycles,time_ns,fidelity_exact,"
        "fidelity_sampled,shots,seed,initial_state";
    if (line != expected)
        throw std::invalid_argument("unrecognized results header in " + path + ": " + line);

    std::vector<FidelityCurve> curves;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 10)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 10 fields, got " + std::to_string(f.size()));
        try {
            const SequenceName seq = parse_sequence_name(f[0]);
            const CompilationStrategy strat =
                f[1] == "none" ? CompilationStrategy::Symmetric : parse_strategy(f[1]);
            const double mult = std::stod(f[2]);
            const InitialState init = parse_initial_state(f[9]);
            CurvePoint p{};
            p.cycles = std::stoi(f[3]);
            p.time_ns = std::stod(f[4]);
            p.fidelity_exact = std::stod(f[5]);
            p.fidelity_sampled = std::stod(f[6]);
            p.shots = std::stoi(f[7]);
            p.seed = std::stoull(f[8]);
            auto match = std::find_if(curves.begin(), curves.end(), [&](const FidelityCurve &c) {
                return c.sequence == seq && c.strategy == strat &&
                       c.spacing_multiplier == mult && c.initial_state == init;
            });
            if (match == curves.end()) {
                curves.push_back(FidelityCurve{seq, strat, mult, init, {}});
                match = std::prev(curves.end());
            }
            match->points.push_back(p);
        } catch (const std::exception &e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return curves;
}

}  // namespace vzsim
