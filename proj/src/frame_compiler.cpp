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

#include "vzsim/frame_compiler.hpp"

#include <cmath>
#include <stdexcept>

namespace vzsim {

namespace {

/// Distance between angles on the circle, in [0, pi].
double circular_dist(double a, double b) {
    double d = std::fabs(reduce_2pi(a) - reduce_2pi(b));
    return std::min(d, kTwoPi - d);
}

}  // namespace

PulseSchedule fold(const GateSequence &seq, const ScheduleConfig &timing) {
    // Sign convention: rot(phi, th) rz(a) = rz(a) rot(phi - a, th), so a
    // frame a accumulated *before* a pulse shifts its emitted axis by -a.
    // Pinned by the matrix identity R_x(pi) R_z(+-pi) = -R_z(-+pi) R_x(-pi)
    // (asserted in the tests).
    PulseSchedule out;
    double c = 0;
    double free_time = 0;
    int n = 0;
    for (const Gate &g : seq.gates) {
        if (const auto *z = std::get_if<VirtualZ>(&g)) {
            c = reduce_2pi(c + z->alpha);
        } else if (const auto *p = std::get_if<PhysicalPulseGate>(&g)) {
            PhysicalPulse pulse;
            pulse.phase = reduce_2pi(p->rotation.phi - c);
            pulse.angle = p->rotation.theta;
            double peak = (n + 0.5) * timing.pulse_interval_ns;
            pulse.start_ns = peak - timing.gate_duration_ns / 2;
            pulse.duration_ns = timing.gate_duration_ns;
            out.pulses.push_back(pulse);
            n++;
        } else {
            free_time += std::get<FreeEvolution>(g).duration_ns;
        }
    }
    out.residual_frame = c;
    out.total_duration_ns = n > 0 ? n * timing.pulse_interval_ns : free_time;
    return out;
}

bool physically_equivalent(const PulseSchedule &a, const PulseSchedule &b, double tol,
                           bool allow_axis_flip) {
    if (a.pulses.size() != b.pulses.size()) {
        return false;
    }
    for (size_t i = 0; i < a.pulses.size(); i++) {
        const PhysicalPulse &pa = a.pulses[i];
        PhysicalPulse pb = b.pulses[i];
        if (allow_axis_flip && std::signbit(pb.angle) != std::signbit(pa.angle)) {
            pb.phase = reduce_2pi(pb.phase + kPi);
            pb.angle = -pb.angle;
        }
        bool match = circular_dist(pa.phase, pb.phase) <= tol &&
                     std::fabs(pa.angle - pb.angle) <= tol &&
                     std::fabs(pa.start_ns - pb.start_ns) <= 1e-9 &&
                     std::fabs(pa.duration_ns - pb.duration_ns) <= 1e-9;
        if (!match) {
            return false;
        }
    }
    return circular_dist(a.residual_frame, b.residual_frame) <= tol;
}

Mat2 schedule_unitary(const PulseSchedule &s) {
    Mat2 u = Mat2::identity();
    for (const PhysicalPulse &p : s.pulses) {
        u = rotation_unitary(Rotation(p.phase, p.angle)) * u;
    }
    return rz_unitary(s.residual_frame) * u;
}

GateSequence as_gate_sequence(const PulseSchedule &s) {
    GateSequence seq;
    seq.name = "folded";
    for (const PhysicalPulse &p : s.pulses) {
        seq.gates.push_back(PhysicalPulseGate{Rotation(p.phase, p.angle)});
    }
    seq.gates.push_back(VirtualZ{s.residual_frame});
    return seq;
}

}  // namespace vzsim
