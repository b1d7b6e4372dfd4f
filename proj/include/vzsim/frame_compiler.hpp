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

#ifndef VZSIM_FRAME_COMPILER_HPP
#define VZSIM_FRAME_COMPILER_HPP

#include "vzsim/gate_ir.hpp"

namespace vzsim {

/// A timed drive pulse after frame folding. `phase` is the absolute drive
/// phase in [0, 2pi); `angle` keeps the signed nominal rotation.
struct PhysicalPulse {
    double phase;
    double angle;
    double start_ns;
    double duration_ns;
};

/// Canonical physically-executed schedule: folded pulses plus the virtual
/// phase left over at the end. The residual matters when composing with
/// further gates; at a sigma_z measurement it reduces to a global phase.
struct PulseSchedule {
    std::vector<PhysicalPulse> pulses;
    double residual_frame;
    double total_duration_ns;
};

/// Timing for folding: pulse peaks sit on a uniform grid of
/// `pulse_interval_ns` (peak-to-peak delay), first peak at interval/2.
struct ScheduleConfig {
    double pulse_interval_ns;
    double gate_duration_ns;
};

/// Fold every virtual-Z through the physical pulses. Walking in time
/// order with accumulator c (reduced mod 2pi as it goes):
///   Rz(alpha)      -> c += alpha
///   pulse(phi, th) -> emit phase (phi - c) mod 2pi at the next slot
///   free evolution -> advance time
/// The n-th pulse peak lands at (n + 1/2) * interval; total duration is
/// n_pulses * interval (or the summed free time for a pulse-free
/// sequence).
PulseSchedule fold(const GateSequence &seq, const ScheduleConfig &timing);

/// True iff the schedules match pulse-for-pulse: circular phase distance
/// and |angle difference| within tol, timing within 1e-9 ns, and residual
/// frames equal mod 2pi within tol (a 2pi discrepancy is a global phase
/// and counts as agreement). With `allow_axis_flip`, (phase, -theta) is
/// treated as (phase + pi, theta).
bool physically_equivalent(const PulseSchedule &a, const PulseSchedule &b, double tol = 1e-9,
                           bool allow_axis_flip = false);

/// Noiseless oracle: rz(residual) * product of pulse unitaries.
Mat2 schedule_unitary(const PulseSchedule &s);

/// Re-express a folded schedule as a GateSequence of bare pulses plus a
/// trailing VirtualZ(residual); folding that sequence reproduces `s`
/// (fold is idempotent in effect).
GateSequence as_gate_sequence(const PulseSchedule &s);

}  // namespace vzsim

#endif
