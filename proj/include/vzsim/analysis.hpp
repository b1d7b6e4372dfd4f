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

#ifndef VZSIM_ANALYSIS_HPP
#define VZSIM_ANALYSIS_HPP

#include <string>
#include <utility>
#include <vector>

#include "vzsim/lindblad.hpp"

namespace vzsim {

/// Exponential-decay fit f(t) ~ a + b exp(-t / T_D): a is the asymptote,
/// b the decaying amplitude. converged=false marks degenerate (constant)
/// input, reported as a = mean, b = 0, T_D_us = 0.
struct DecayFit {
    double a;
    double b;
    double T_D_us;
    double rms_residual;
    bool converged;
};

/// Deterministic fit: 64 log-spaced T_D candidates spanning
/// [total_time/100, 100 * total_time], closed-form least squares for
/// (a, b) at each, then golden-section refinement of T_D. The candidate
/// grid is built from the normalized time axis, so scaling all times by k
/// scales the fitted T_D by exactly k. Requires >= 6 points.
DecayFit fit_decay(const std::vector<double> &time_ns, const std::vector<double> &fidelity);

/// Same fit on a curve's exact fidelities.
DecayFit fit_decay(const FidelityCurve &curve);

/// Dominant non-DC spectral component of the fit residuals. amplitude is
/// the peak bin magnitude times 2/N (the amplitude of a pure cosine at
/// that bin); both fields are 0 when the residuals vanish identically.
struct OscillationMetric {
    double amplitude;
    double period_ns;
};

/// DFT of (fidelity - fit model) on a uniform time grid; throws on
/// non-uniform sampling (> 1e-6 relative step jitter) or < 4 points.
OscillationMetric oscillation_metric(const std::vector<double> &time_ns,
                                     const std::vector<double> &fidelity, const DecayFit &fit);

/// Curve convenience wrapper. With sampled_mode the metric is computed on
/// the sampled fidelities and amplitudes below the shot-noise floor
/// 3/sqrt(shots) are reported as 0.
OscillationMetric oscillation_metric(const FidelityCurve &curve, const DecayFit &fit,
                                     bool sampled_mode = false);

/// One pairwise line of the ordering report: across n index-paired
/// ensemble members, the fraction with T_D(a) >= T_D(b) (ties count).
struct OrderingRow {
    std::string label_a;
    std::string label_b;
    double fraction_a_ge_b;
    double mean_a;  // mean T_D_us over all converged fits of label_a
    double mean_b;
    size_t n;  // paired members compared
};

/// Group fits by label (first-appearance order), drop non-converged
/// entries, and compare every label pair member-by-member. Throws unless
/// at least 2 converged fits remain.
std::vector<OrderingRow> compare_decay_constants(
    const std::vector<std::pair<std::string, DecayFit>> &fits);

}  // namespace vzsim

#endif
