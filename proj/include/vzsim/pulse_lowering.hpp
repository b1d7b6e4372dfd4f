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

#ifndef VZSIM_PULSE_LOWERING_HPP
#define VZSIM_PULSE_LOWERING_HPP

#include <cstdint>
#include <vector>

#include "vzsim/frame_compiler.hpp"

namespace vzsim {

/// Gaussian envelope truncated at +-truncation_window around the peak
/// and baseline-shifted so the core reaches zero continuously at the
/// window edge (the usual truncated-and-shifted pulse definition).
struct GaussianEnvelope {
    double sigma_ns;
    double truncation_window_ns;
};

/// Hann window: 0.5 (1 + cos(pi (t - peak) / (t_g/2))). Reaches zero
/// smoothly at the window edge, so it has no truncation tails.
struct CosineRampEnvelope {};

using Envelope = std::variant<GaussianEnvelope, CosineRampEnvelope>;

struct PulseShape {
    double t_g_ns;
    Envelope envelope;

    /// Gaussian with sigma = t_g/4 truncated at +-t_g/2 (common transmon
    /// practice; the shape is a modeling choice, not a measured one).
    static PulseShape gaussian(double t_g_ns);
    static PulseShape cosine_ramp(double t_g_ns);
};

struct NoInterference {};

/// Truncation tails: each Gaussian pulse continues past its window edge
/// for `extension_ns` on any side that has a close neighbor, scaled by
/// proximity and shaped by a sin^2 bump window (zero value and slope at
/// the window edge and at the cutoff, keeping the field C1 on every
/// grid). Isolated pulses reduce exactly to the NoInterference field.
/// Models coherent cross-talk between consecutive pulses that dies off
/// as the pulse interval grows.
struct TailOverlap {
    double extension_ns;
};

/// A delayed, attenuated, phase-shifted copy of every pulse (e.g. a
/// reflection off an impedance step). Does not vanish with pulse spacing.
struct EchoReflection {
    double reflection_amplitude;
    double delay_ns;
    double phase_shift_rad;
};

using InterferenceModel = std::variant<NoInterference, TailOverlap, EchoReflection>;

/// Complex baseband drive eps(t) e^{i phi(t)} sampled on a uniform grid.
/// dt_ns is the integrator step; samples sit at dt/2 spacing (2*n_steps+1
/// of them) so one RK4 step sees its begin/mid/end field values.
/// `pulse_active` marks samples inside any pulse's core window, used to
/// gate the amplitude-error term.
struct DriveField {
    std::vector<cplx> samples;
    std::vector<uint8_t> pulse_active;
    double dt_ns;
    double span_ns;

    size_t n_steps() const { return samples.empty() ? 0 : (samples.size() - 1) / 2; }
};

/// Coefficient trace for H(t) = (hx sx + hy sy + hz sz)/2, on the same
/// half-step grid as DriveField. hz is constant (detuning).
struct HamiltonianTrace {
    std::vector<double> hx;
    std::vector<double> hy;
    double hz;
    double dt_ns;
    double span_ns;

    size_t n_steps() const { return hx.empty() ? 0 : (hx.size() - 1) / 2; }
};

/// Lower a folded schedule to a drive field. Each pulse's envelope is
/// calibrated on the discrete grid (the same quadrature the integrator
/// effectively applies) so its nominal angle is realized to rounding;
/// interference contributions are added after calibration, since they are
/// the distortion being modeled. Throws if pulse cores overlap (peak
/// separation < t_g), a pulse's duration disagrees with the shape, or the
/// timing does not sit on the dt/2 grid to within 1e-6 ns.
DriveField lower(const PulseSchedule &s, const PulseShape &shape,
                 const InterferenceModel &interference, double dt_ns);

/// hx = Re(field) + [pulse active] * eps_err, hy = Im(field), hz = del_err.
/// eps_err (amplitude miscalibration) acts only while a pulse is played;
/// del_err (detuning) acts at all times.
HamiltonianTrace inject_coherent_errors(const DriveField &field, double eps_err, double del_err);

/// Integral of the field over its span using the integrator-matched
/// quadrature (composite Simpson on the half-step grid). A lone calibrated
/// pulse of angle theta at phase phi integrates to theta * e^{i phi}.
cplx field_area(const DriveField &field);

}  // namespace vzsim

#endif
