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

#ifndef VZSIM_CONFIG_IO_HPP
#define VZSIM_CONFIG_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vzsim/analysis.hpp"

namespace vzsim {

inline constexpr const char *kVzsimVersion = "0.1.0";

struct SequenceChoice {
    SequenceName name;
    CompilationStrategy strategy;
};

/// The default reporting grid, in 4-slot-normalized cycles: 8, 16, ..,
/// 320. Sequences with fewer pulse slots per cycle run proportionally
/// more cycles so every curve shares the same total-time grid.
std::vector<int> default_cycle_grid();

/// A fully resolved experiment description. Defaults follow the
/// experimental setup this models where one was reported (tau_ns, shots)
/// and are modeling assumptions otherwise; the run manifest records which
/// is which.
struct ExperimentConfig {
    std::vector<SequenceChoice> sequences;
    std::vector<double> spacing_multipliers{1.0};
    double tau_ns = 56.8;
    double t_g_ns = 56.8;
    std::vector<int> cycle_counts = default_cycle_grid();
    std::vector<InitialState> initial_states{InitialState::plus_i};
    NoiseModel noise;
    int shots = 800;
    uint64_t seed = 1;
    double dt_ns = 0.1;
    std::string output_path = "results";
    PulseShape shape = PulseShape::gaussian(56.8);
    bool physical_prep = false;
    XbarVariant xbar_variant = XbarVariant::LeadPlusPi;
};

/// Parse and validate a config document. Every failure throws
/// std::invalid_argument naming the offending field path (e.g.
/// "config: noise.T1_us: expected a positive number or null"); nothing
/// partially constructed escapes. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string &json_text);

/// parse_config over a file; the filename is included in errors.
ExperimentConfig load_config(const std::string &path);

/// Canonical full-form serialization (every field explicit, fixed key
/// order). parse_config(config_to_json(c)) reproduces c exactly.
std::string config_to_json(const ExperimentConfig &cfg);

/// config_to_json to a file.
void save_config(const ExperimentConfig &cfg, const std::string &path);

///// Run manifest: tool name/version, optional timestamp (empty -> null,
/// keeping repeated runs byte-identical), the full config echo, and a
/// provenance flag for every default ("experiment" vs "assumed").
std::string manifest_json(const ExperimentConfig &cfg, const std::string &timestamp = "");

/// Per-curve analysis attached to the result sidecar.
struct CurveReport {
    std::string label;
    DecayFit fit;
    OscillationMetric osc;
};

/// Write <base_path>.csv (header
/// sequence,strategy,spacing_multiplier,cycles,time_ns,fidelity_exact,
/// fidelity_sampled,shots,seed,initial_state; 9 significant digits) and
/// <base_path>.json ({"manifest": .., "fits": [..]}). Output is
/// byte-stable for fixed inputs. I/O failures carry the path.
void write_results(const std::vector<FidelityCurve> &curves,
                   const std::vector<CurveReport> &reports, const ExperimentConfig &cfg,
                   const std::string &base_path, const std::string &timestamp = "");

/// Read a CSV written by write_results back into curves (grouped in
/// first-appearance order). Values round-trip at the CSV's 9-digit
/// precision.
std::vector<FidelityCurve> read_results_csv(const std::string &path);

}  // namespace vzsim

#endif
