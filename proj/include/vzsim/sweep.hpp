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

#ifndef VZSIM_SWEEP_HPP
#define VZSIM_SWEEP_HPP

#include "vzsim/config_io.hpp"

namespace vzsim {

struct SweepResult {
    std::vector<FidelityCurve> curves;
    std::vector<CurveReport> reports;
};

/// Run every (sequence, spacing multiplier, initial state) combination in
/// the config over its cycle grid.
///
/// Cycle counts are 4-slot-normalized: a configured count c runs
/// c * 4 / slots_per_cycle cycles, so 2-pulse, 4-pulse and pulse-free
/// curves sample identical total times (4 * c * tau * multiplier) and stay
/// directly comparable. The CSV `cycles` column records the count actually
/// run.
///
/// Each point's RNG seed is cfg.seed ^ row_index, rows numbered in CSV
/// write order, so any single row can be reproduced in isolation.
///
/// Reports are best effort: curves with fewer than 6 points get a
/// non-converged flat fit, and the oscillation metric is zero when the
/// time grid is not uniform (the spectral estimate needs uniform
/// sampling).
SweepResult sweep_experiment(const ExperimentConfig &cfg);

}  // namespace vzsim

#endif
