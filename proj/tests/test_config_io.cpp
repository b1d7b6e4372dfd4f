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
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "vzsim/config_io.hpp"

using namespace vzsim;

namespace {

const std::string kMinimal = R"({"sequences": [{"name": "XY4"}]})";

template <typename Fn>
std::string thrown_message(Fn &&fn) {
    try {
        fn();
    } catch (const std::exception &e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string &haystack, const std::string &needle) {
    return haystack.find(needle) != std::string::npos;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
    const ExperimentConfig cfg = parse_config(kMinimal);
    REQUIRE(cfg.sequences.size() == 1);
    CHECK(cfg.sequences[0].name == SequenceName::XY4);
    CHECK(cfg.sequences[0].strategy == CompilationStrategy::Symmetric);
    CHECK(cfg.spacing_multipliers == std::vector<double>{1.0});
    CHECK(cfg.tau_ns == 56.8);
    CHECK(cfg.t_g_ns == 56.8);
    REQUIRE(cfg.cycle_counts.size() == 40);
    CHECK(cfg.cycle_counts.front() == 8);
    CHECK(cfg.cycle_counts.back() == 320);
    REQUIRE(cfg.initial_states.size() == 1);
    CHECK(cfg.initial_states[0] == InitialState::plus_i);
    CHECK(cfg.noise.T1_us == 100.0);
    CHECK(cfg.noise.Tphi_us == 100.0);
    CHECK(cfg.noise.delta_theta_rad == 0.01);
    CHECK(cfg.noise.delta_phi_rad == 0.01);
    CHECK(cfg.noise.quasistatic_sigma == kPi * 1e-5);
    REQUIRE(std::holds_alternative<TailOverlap>(cfg.noise.interference));
    CHECK(std::get<TailOverlap>(cfg.noise.interference).extension_ns == 28.4);
    CHECK(cfg.shots == 800);
    CHECK(cfg.seed == 1);
    CHECK(cfg.dt_ns == 0.1);
    CHECK(cfg.output_path == "results");
    REQUIRE(std::holds_alternative<GaussianEnvelope>(cfg.shape.envelope));
    CHECK(std::get<GaussianEnvelope>(cfg.shape.envelope).sigma_ns == 14.2);
    CHECK(std::get<GaussianEnvelope>(cfg.shape.envelope).truncation_window_ns == 28.4);
    CHECK(cfg.shape.t_g_ns == 56.8);
    CHECK(!cfg.physical_prep);
    CHECK(cfg.xbar_variant == XbarVariant::LeadPlusPi);
}

TEST_CASE("canonical serialization round-trips exactly") {
    const std::string full = R"({
      "sequences": [
        {"name": "XY4", "strategy": "asym"},
        {"name": "UR4"},
        {"name": "YY", "strategy": "sym"},
        {"name": "XXbar"},
        {"name": "FREE"}
      ],
      "spacing_multipliers": [1.0, 2.5],
      "tau_ns": 60.0,
      "t_g_ns": 40.0,
      "cycle_counts": [2, 4, 8, 16],
      "initial_states": ["plus_i", "minus_i", "plus", "zero"],
      "noise": {
        "T1_us": 85.0,
        "Tphi_us": null,
        "delta_theta_rad": -0.02,
        "delta_phi_rad": 0.005,
        "quasistatic_sigma_rad_per_ns": 1e-5,
        "interference": {"model": "echo", "reflection_amplitude": 0.2,
                         "delay_ns": 7.5, "phase_shift_rad": 0.1}
      },
      "shots": 400,
      "seed": 99,
      "dt_ns": 0.25,
      "output_path": "out/run1",
      "envelope": {"shape": "gaussian", "sigma_ns": 11.0, "truncation_window_ns": 22.0},
      "physical_prep": true,
      "xbar_variant": "lead_minus_pi"
    })";
    const ExperimentConfig cfg = parse_config(full);
    CHECK(std::isinf(cfg.noise.Tphi_us));
    CHECK(cfg.noise.T1_us == 85.0);
    CHECK(cfg.t_g_ns == 40.0);
    CHECK(cfg.physical_prep);
    CHECK(cfg.xbar_variant == XbarVariant::LeadMinusPi);
    REQUIRE(std::holds_alternative<EchoReflection>(cfg.noise.interference));
    CHECK(std::get<EchoReflection>(cfg.noise.interference).delay_ns == 7.5);

    const std::string canon = config_to_json(cfg);
    CHECK(config_to_json(parse_config(canon)) == canon);
    CHECK(contains(canon, "\"Tphi_us\": null"));
    // FREE carries no strategy in canonical form.
    CHECK(!contains(canon, "\"FREE\",\n        \"strategy\""));
}

TEST_CASE("t_g defaults to tau when omitted") {
    const ExperimentConfig cfg =
        parse_config(R"({"sequences": [{"name": "YY"}], "tau_ns": 100.0})");
    CHECK(cfg.t_g_ns == 100.0);
    CHECK(std::get<TailOverlap>(cfg.noise.interference).extension_ns == 50.0);
    CHECK(std::get<GaussianEnvelope>(cfg.shape.envelope).sigma_ns == 25.0);
}

TEST_CASE("FREE strategy is normalized to sym") {
    const ExperimentConfig cfg =
        parse_config(R"({"sequences": [{"name": "FREE", "strategy": "asym"}]})");
    CHECK(cfg.sequences[0].strategy == CompilationStrategy::Symmetric);
    CHECK(contains(config_to_json(cfg), "\"name\": \"FREE\""));
}

TEST_CASE("UR4 and XXbar reject the asymmetric strategy") {
    const std::string msg = thrown_message([] {
        parse_config(R"({"sequences": [{"name": "XY4"}, {"name": "UR4", "strategy": "asym"}]})");
    });
    CHECK(contains(msg, "sequences[1].strategy"));
    CHECK_THROWS_AS(
        parse_config(R"({"sequences": [{"name": "XXbar", "strategy": "asym"}]})"),
        std::invalid_argument);
}

TEST_CASE("errors carry dotted field paths") {
    CHECK(contains(thrown_message([] { parse_config(R"({"sequence": []})"); }),
                   "config: sequence: unknown key"));
    CHECK(contains(
        thrown_message([] {
            parse_config(R"({"sequences": [{"name": "XY4"}], "noise": {"T1_ns": 3}})");
        }),
        "noise.T1_ns"));
    CHECK(contains(
        thrown_message([] {
            parse_config(R"({"sequences": [{"name": "XY4"}],
                             "noise": {"interference": {"model": "fancy"}}})");
        }),
        "noise.interference.model"));
    CHECK(contains(thrown_message([] {
                       parse_config(R"({"sequences": [{"name": "QQ4"}]})");
                   }),
                   "sequences[0].name"));
    CHECK(contains(thrown_message([] {
                       parse_config(R"({"sequences": [{"name": "XY4"}], "shots": -1})");
                   }),
                   "config: shots"));
    CHECK(contains(thrown_message([] {
                       parse_config(R"({"sequences": [{"name": "XY4"}],
                                        "cycle_counts": [4, 4]})");
                   }),
                   "cycle_counts[1]"));
    CHECK(contains(thrown_message([] {
                       parse_config(R"({"sequences": [{"name": "XY4"}],
                                        "spacing_multipliers": [0.0]})");
                   }),
                   "spacing_multipliers[0]"));
    CHECK(contains(thrown_message([] { parse_config("{nope"); }), "JSON parse error"));
    CHECK(contains(thrown_message([] {
                       parse_config(R"({"sequences": [{"name": "XY4"}], "noise": {"T1_us": 0}})");
                   }),
                   "noise.T1_us"));
}

TEST_CASE("pulses must fit the interval") {
    const std::string msg = thrown_message([] {
        parse_config(R"({"sequences": [{"name": "XY4"}], "tau_ns": 30.0, "t_g_ns": 56.8})");
    });
    CHECK(contains(msg, "tau_ns"));
    CHECK(contains(msg, "t_g_ns"));
    // Explicit t_g below tau is fine.
    CHECK_NOTHROW(
        parse_config(R"({"sequences": [{"name": "XY4"}], "tau_ns": 30.0, "t_g_ns": 20.0})"));
}

TEST_CASE("dt must resolve the gaussian envelope") {
    const std::string msg = thrown_message([] {
        parse_config(R"({"sequences": [{"name": "XY4"}], "dt_ns": 2.0})");
    });
    CHECK(contains(msg, "config: dt_ns"));
    // cosine_ramp has no sigma constraint; the same dt passes.
    CHECK_NOTHROW(parse_config(R"({"sequences": [{"name": "XY4"}], "dt_ns": 2.0,
                                   "envelope": {"shape": "cosine_ramp"}})"));
}

TEST_CASE("load_config names the file in errors") {
    const std::string path = "cfgio_broken.json";
    {
        std::ofstream out(path);
        out << R"({"sequences": [{"name": "XY4"}], "shots": -5})";
    }
    const std::string msg = thrown_message([&] { load_config(path); });
    CHECK(contains(msg, "config: shots"));
    CHECK(contains(msg, path));
    CHECK_THROWS_AS(load_config("no_such_file.json"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("bundled configs validate") {
    const std::string dir = VZSIM_CONFIG_DIR;
    for (const char *name : {"yy_asymmetry.json", "sequence_zoo.json", "interval_sweep.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_config(dir + "/" + name));
    }
    const ExperimentConfig yy = load_config(dir + "/yy_asymmetry.json");
    CHECK(yy.sequences.size() == 2);
    CHECK(yy.initial_states.size() == 2);
    CHECK(std::isinf(yy.noise.Tphi_us));
    CHECK(std::holds_alternative<NoInterference>(yy.noise.interference));
}

TEST_CASE("manifest records provenance") {
    const ExperimentConfig cfg = parse_config(kMinimal);
    const std::string anon = manifest_json(cfg);
    CHECK(contains(anon, "\"tool\": \"vzsim\""));
    CHECK(contains(anon, "\"timestamp\": null"));
    CHECK(contains(anon, "\"defaults_provenance\""));
    CHECK(contains(anon, "\"tau_ns\": \"experiment\""));
    CHECK(contains(anon, "\"shots\": \"experiment\""));
    CHECK(contains(anon, "\"dt_ns\": \"assumed\""));
    // Identical inputs give identical bytes.
    CHECK(manifest_json(cfg) == anon);
    const std::string stamped = manifest_json(cfg, "2026-08-25T12:00:00Z");
    CHECK(contains(stamped, "\"timestamp\": \"2026-08-25T12:00:00Z\""));
}

TEST_CASE("results round-trip through CSV") {
    FidelityCurve a{SequenceName::XY4, CompilationStrategy::Asymmetric, 1.0,
                    InitialState::plus_i, {}};
    a.points.push_back(CurvePoint{4, 908.8, 0.987654321, 0.9875, 800, 1});
    a.points.push_back(CurvePoint{8, 1817.6, 0.975308642, 0.97625, 800, 2});
    FidelityCurve b{SequenceName::FREE, CompilationStrategy::Symmetric, 2.5,
                    InitialState::minus_i, {}};
    b.points.push_back(CurvePoint{16, 2272.0, 0.5, 0.5, 0, 12345678901234567890ULL});

    CurveReport rep{a.label(), DecayFit{0.5, 0.5, 100.0, 1e-4, true},
                    OscillationMetric{0.01, 900.0}};
    const ExperimentConfig cfg = parse_config(kMinimal);
    write_results({a, b}, {rep}, cfg, "cfgio_rt");

    const std::string csv = slurp("cfgio_rt.csv");
    CHECK(contains(csv, "sequence,strategy,spacing_multiplier,cycles,time_ns,fidelity_exact,"
                        "fidelity_sampled,shots,seed,initial_state"));
    CHECK(contains(csv, "XY4,asym,1,4,908.8,0.987654321,0.9875,800,1,plus_i"));
    CHECK(contains(csv, "FREE,none,2.5,16,2272,0.5,0.5,0,12345678901234567890,minus_i"));
    const std::string side = slurp("cfgio_rt.json");
    CHECK(contains(side, "\"label\": \"XY4:asym@1:plus_i\""));
    CHECK(contains(side, "\"T_D_us\": 100.0"));
    CHECK(contains(side, "\"manifest\""));

    const auto curves = read_results_csv("cfgio_rt.csv");
    REQUIRE(curves.size() == 2);
    CHECK(curves[0].sequence == SequenceName::XY4);
    CHECK(curves[0].strategy == CompilationStrategy::Asymmetric);
    REQUIRE(curves[0].points.size() == 2);
    // 9-significant-digit literals survive the %.9g round trip bit-exactly.
    CHECK(curves[0].points[1].fidelity_exact == 0.975308642);
    CHECK(curves[0].points[1].time_ns == 1817.6);
    CHECK(curves[1].sequence == SequenceName::FREE);
    CHECK(curves[1].spacing_multiplier == 2.5);
    CHECK(curves[1].points[0].seed == 12345678901234567890ULL);
    CHECK(curves[1].initial_state == InitialState::minus_i);

    // Rewriting the same inputs is byte-identical.
    write_results({a, b}, {rep}, cfg, "cfgio_rt2");
    CHECK(slurp("cfgio_rt2.csv") == csv);
    CHECK(slurp("cfgio_rt2.json") == side);

    // No curves -> header-only file that still reads back.
    write_results({}, {}, cfg, "cfgio_empty");
    CHECK(read_results_csv("cfgio_empty.csv").empty());

    for (const char *p : {"cfgio_rt.csv", "cfgio_rt.json", "cfgio_rt2.csv", "cfgio_rt2.json",
                          "cfgio_empty.csv", "cfgio_empty.json"})
        std::remove(p);
}

TEST_CASE("read_results_csv rejects malformed input") {
    {
        std::ofstream out("cfgio_badhdr.csv");
        out << "sequence,strategy\nXY4,asym\n";
    }
    CHECK_THROWS_AS(read_results_csv("cfgio_badhdr.csv"), std::invalid_argument);
    std::remove("cfgio_badhdr.csv");
    CHECK_THROWS_AS(read_results_csv("cfgio_missing.csv"), std::runtime_error);
}
