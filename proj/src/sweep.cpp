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

#include "vzsim/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace vzsim {
namespace {

bool uniform_grid(const std::vector<CurvePoint> &pts) {
    if (pts.size() < 3) return false;
    const double dt = pts[1].time_ns - pts[0].time_ns;
    if (!(dt > 0.0)) return false;
    for (size_t i = 1; i < pts.size(); ++i) {
        const double step = pts[i].time_ns - pts[i - 1].time_ns;
        if (std::abs(step - dt) > 1e-6 * dt) return false;
    }
    return true;
}

CurveReport report_for(const FidelityCurve &c) {
    CurveReport r;
    r.label = c.label();
    if (c.points.size() < 6) {
        double mean = 0.0;
        for (const auto &p : c.points) mean += p.fidelity_exact;
        if (!c.points.empty()) mean /= static_cast<double>(c.points.size());
        r.fit = DecayFit{mean, 0.0, 0.0, 0.0, false};
        r.osc = OscillationMetric{0.0, 0.0};
        return r;
    }
    r.fit = fit_decay(c);
    r.osc = uniform_grid(c.points) ? oscillation_metric(c, r.fit) : OscillationMetric{0.0, 0.0};
    return r;
}

}  // namespace

SweepResult sweep_experiment(const ExperimentConfig &cfg) {
    SweepResult out;
    uint64_t row = 0;
    for (const auto &choice : cfg.sequences) {
        const int slots = slots_per_cycle(choice.name);
        for (const double mult : cfg.spacing_multipliers) {
            const double interval = cfg.tau_ns * mult;
            const GateSequence cycle =
                build_sequence(choice.name, choice.strategy, interval, cfg.xbar_variant);
            ProtocolOptions opt;
            opt.tau_ns = cfg.tau_ns;
            opt.t_g_ns = cfg.t_g_ns;
            opt.dt_ns = cfg.dt_ns;
            opt.spacing_multiplier = mult;
            opt.shape = cfg.shape;
            opt.physical_prep = cfg.physical_prep;
            opt.xbar_variant = cfg.xbar_variant;
            for (const InitialState init : cfg.initial_states) {
                FidelityCurve curve{choice.name, choice.strategy, mult, init, {}};
                for (const int c : cfg.cycle_counts) {
                    const int n_run = c * 4 / slots;
                    const uint64_t seed = cfg.seed ^ row;
                    ++row;
                    const ProtocolResult res =
                        run_protocol(init, cycle, n_run, cfg.noise, opt, cfg.shots, seed);
                    CurvePoint p{};
                    p.cycles = n_run;
                    p.time_ns = static_cast<double>(n_run) * slots * interval;
                    p.fidelity_exact = res.fidelity_exact;
                    p.fidelity_sampled = res.fidelity_sampled;
                    p.shots = cfg.shots;
                    p.seed = seed;
                    curve.points.push_back(p);
                }
                out.curves.push_back(std::move(curve));
            }
        }
    }
    out.reports.reserve(out.curves.size());
    for (const auto &c : out.curves) out.reports.push_back(report_for(c));
    return out;
}

}  // namespace vzsim
