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

#include "vzsim/gate_ir.hpp"

#include <stdexcept>

namespace vzsim {

namespace {

Gate x_pulse() {
    return PhysicalPulseGate{Rotation(0, kPi)};
}

void append(std::vector<Gate> &dst, const std::vector<Gate> &src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

GateSequence compile_y(CompilationStrategy strategy) {
    if (strategy == CompilationStrategy::Asymmetric) {
        return GateSequence{{VirtualZ{-kPi}, x_pulse()}, "Y:asym"};
    }
    return GateSequence{{VirtualZ{-kPi / 2}, x_pulse(), VirtualZ{kPi / 2}}, "Y:sym"};
}

GateSequence compile_xbar(XbarVariant variant) {
    double lead = variant == XbarVariant::LeadPlusPi ? kPi : -kPi;
    return GateSequence{{VirtualZ{lead}, x_pulse(), VirtualZ{-lead}}, "Xbar"};
}

GateSequence build_sequence(SequenceName name, CompilationStrategy strategy, double tau_ns,
                            XbarVariant xbar) {
    if (tau_ns < 0) {
        throw std::invalid_argument("build_sequence: tau_ns must be >= 0");
    }
    if ((name == SequenceName::UR4 || name == SequenceName::XXbar) &&
        strategy == CompilationStrategy::Asymmetric) {
        throw std::invalid_argument(
            "build_sequence: " + to_string(name) +
            " has a single correct construction; asymmetric strategy is not meaningful");
    }
    GateSequence seq;
    seq.name = to_string(name) + ":" + to_string(strategy);
    Gate f = FreeEvolution{tau_ns};
    switch (name) {
        case SequenceName::XY4:
            // Operator order X f Y f X f Y f ... stored time-first.
            for (int k = 0; k < 2; k++) {
                seq.gates.push_back(f);
                seq.gates.push_back(x_pulse());
                seq.gates.push_back(f);
                append(seq.gates, compile_y(strategy).gates);
            }
            break;
        case SequenceName::UR4:
            seq.gates.push_back(f);
            seq.gates.push_back(x_pulse());
            seq.gates.push_back(f);
            append(seq.gates, compile_xbar(xbar).gates);
            seq.gates.push_back(f);
            append(seq.gates, compile_xbar(xbar).gates);
            seq.gates.push_back(f);
            seq.gates.push_back(x_pulse());
            seq.name = "UR4:sym";
            break;
        case SequenceName::YY:
            for (int k = 0; k < 2; k++) {
                seq.gates.push_back(f);
                append(seq.gates, compile_y(strategy).gates);
            }
            break;
        case SequenceName::XXbar:
            seq.gates.push_back(f);
            seq.gates.push_back(x_pulse());
            seq.gates.push_back(f);
            append(seq.gates, compile_xbar(xbar).gates);
            seq.name = "XXbar:sym";
            break;
        case SequenceName::FREE:
            seq.gates.push_back(f);
            seq.name = "FREE";
            break;
    }
    return seq;
}

Mat2 ideal_unitary(const GateSequence &seq) {
    Mat2 u = Mat2::identity();
    for (const Gate &g : seq.gates) {
        if (const auto *p = std::get_if<PhysicalPulseGate>(&g)) {
            u = rotation_unitary(p->rotation) * u;
        } else if (const auto *z = std::get_if<VirtualZ>(&g)) {
            u = rz_unitary(z->alpha) * u;
        }
        // FreeEvolution is identity in the noiseless rotating frame.
    }
    return u;
}

int slots_per_cycle(SequenceName name) {
    switch (name) {
        case SequenceName::XY4:
        case SequenceName::UR4:
            return 4;
        case SequenceName::YY:
        case SequenceName::XXbar:
            return 2;
        case SequenceName::FREE:
            return 1;
    }
    throw std::logic_error("slots_per_cycle: unreachable");
}

SequenceName parse_sequence_name(const std::string &s) {
    if (s == "XY4") return SequenceName::XY4;
    if (s == "UR4") return SequenceName::UR4;
    if (s == "YY") return SequenceName::YY;
    if (s == "XXbar") return SequenceName::XXbar;
    if (s == "FREE") return SequenceName::FREE;
    throw std::invalid_argument("unknown sequence name: " + s);
}

std::string to_string(SequenceName name) {
    switch (name) {
        case SequenceName::XY4:
            return "XY4";
        case SequenceName::UR4:
            return "UR4";
        case SequenceName::YY:
            return "YY";
        case SequenceName::XXbar:
            return "XXbar";
        case SequenceName::FREE:
            return "FREE";
    }
    throw std::logic_error("to_string: unreachable");
}

std::string to_string(CompilationStrategy s) {
    return s == CompilationStrategy::Symmetric ? "sym" : "asym";
}

CompilationStrategy parse_strategy(const std::string &s) {
    if (s == "sym") return CompilationStrategy::Symmetric;
    if (s == "asym") return CompilationStrategy::Asymmetric;
    throw std::invalid_argument("unknown strategy (want sym|asym): " + s);
}

}  // namespace vzsim
