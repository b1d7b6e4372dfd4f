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

#ifndef VZSIM_GATE_IR_HPP
#define VZSIM_GATE_IR_HPP

#include <string>
#include <variant>
#include <vector>

#include "vzsim/su2.hpp"

namespace vzsim {

/// Physical drive pulse realizing a rotation about an axis in the (x,y)
/// plane.
struct PhysicalPulseGate {
    Rotation rotation;
};

/// Software z-rotation by alpha radians: instantaneous, error-free.
struct VirtualZ {
    double alpha;
};

/// Undriven interval.
struct FreeEvolution {
    double duration_ns;
};

using Gate = std::variant<PhysicalPulseGate, VirtualZ, FreeEvolution>;

/// Gates stored in TIME ORDER: index 0 is applied first. This is the
/// reverse of right-to-left operator-product notation, fixed repo-wide.
struct GateSequence {
    std::vector<Gate> gates;
    std::string name;
};

enum class CompilationStrategy { Symmetric, Asymmetric };

enum class SequenceName { XY4, UR4, YY, XXbar, FREE };

/// Which of the two equivalent X-bar decompositions to emit. Both fold to
/// the same single pulse at phase pi; they differ only in the sign of the
/// leading virtual-Z.
enum class XbarVariant { LeadPlusPi, LeadMinusPi };

/// Y gate from the native {Rz, sqrt(X), X} set.
///   Asymmetric: [Rz(-pi), X]            (one-sided frame change)
///   Symmetric:  [Rz(-pi/2), X, Rz(pi/2)] (frame change split evenly)
GateSequence compile_y(CompilationStrategy strategy);

/// X-bar = R_x(-pi): [Rz(pi), X, Rz(-pi)] (or the mirrored variant).
GateSequence compile_xbar(XbarVariant variant = XbarVariant::LeadPlusPi);

/// One cycle of a named DD sequence, each pulse preceded by
/// FreeEvolution(tau). Y expands per `strategy`; UR4 and XXbar have a
/// single correct construction and reject Asymmetric rather than ignore
/// it. FREE is a pulse-free baseline cycle of duration tau.
GateSequence build_sequence(SequenceName name, CompilationStrategy strategy, double tau_ns,
                            XbarVariant xbar = XbarVariant::LeadPlusPi);

/// Right-to-left product of the closed-form constituent unitaries;
/// FreeEvolution contributes identity (noiseless rotating frame).
Mat2 ideal_unitary(const GateSequence &seq);

/// Pulse slots per cycle (4 for XY4/UR4, 2 for YY/XXbar, 1 for FREE);
/// used to keep total-time grids aligned across sequence lengths.
int slots_per_cycle(SequenceName name);

SequenceName parse_sequence_name(const std::string &s);
std::string to_string(SequenceName name);
std::string to_string(CompilationStrategy s);
CompilationStrategy parse_strategy(const std::string &s);

}  // namespace vzsim

#endif
