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

#ifndef VZSIM_LINDBLAD_HPP
#define VZSIM_LINDBLAD_HPP

#include <cstdint>
#include <utility>

#include "vzsim/pulse_lowering.hpp"

namespace vzsim {

/// Noise parameters. T1/Tphi may be infinite (rate 0). The coherent
/// errors are specified as the per-pulse rotation error delta_theta and
/// axis-tilt error delta_phi; the Hamiltonian-level rates depend on the
/// gate duration:
///   eps_err = delta_theta / t_g          (on only while a pulse plays)
///   del_err = delta_phi * (pi / t_g)     (detuning, always on)
/// quasistatic_sigma (rad/ns) is the std-dev of a per-shot constant
/// detuning ensemble; 0 disables it.
struct NoiseModel {
    double T1_us = 100.0;
    double Tphi_us = 100.0;
    double delta_theta_rad = 0.01;
    double delta_phi_rad = 0.01;
    double quasistatic_sigma = kPi * 1e-5;  // 2 pi * 5 kHz
    InterferenceModel interference = TailOverlap{28.4};

    double gamma1() const;
    double gamma_phi() const;
    double eps_err(double t_g_ns) const;
    double del_err(double t_g_ns) const;
};

enum class InitialState { plus_i, minus_i, plus, zero };
InitialState parse_initial_state(const std::string &s);
std::string to_string(InitialState s);

/// Ideal instantaneous preparation: |psi> = U |0>.
Mat2 prep_unitary(InitialState s);

/// Throws unless rho is Hermitian (1e-10), unit trace (tr_tol) and has
/// min eigenvalue >= -neg_tol.
void validate_density(const Mat2 &rho, double tr_tol, double neg_tol, const char *context);

/// Integrate d rho/dt = -i[H(t), rho] + (1/T1) D[s-] + (1/(2 Tphi)) D[sz]
/// by fixed-step RK4 over the trace. The result is renormalized when the
/// trace drift is <= 1e-8; larger drift (or eigenvalue below -1e-6)
/// raises an integration-failure error: dt is too coarse. A benign tiny
/// negative eigenvalue (integrator rounding) is clipped by projecting
/// onto the physical cone, so returned states are always PSD.
Mat2 evolve(const Mat2 &rho0, const HamiltonianTrace &trace, const NoiseModel &noise);

/// Deterministic stand-in for the per-shot detuning draw: 32-point
/// Gauss-Hermite quadrature of a Gaussian with std-dev sigma, returned as
/// (delta, weight) pairs with weights summing to 1.
std::vector<std::pair<double, double>> quasistatic_ensemble(double sigma);

struct ProtocolOptions {
    double tau_ns = 56.8;
    double t_g_ns = 56.8;
    double dt_ns = 0.1;
    double spacing_multiplier = 1.0;
    PulseShape shape = PulseShape::gaussian(56.8);
    /// Prepare/unprepare with real sqrt(X)-based pulses inside the
    /// schedule instead of ideal instantaneous unitaries.
    bool physical_prep = false;
    XbarVariant xbar_variant = XbarVariant::LeadPlusPi;
};

struct ProtocolResult {
    double fidelity_exact;
    double fidelity_sampled;
};

/// One prepare / run `cycles` repetitions / unprepare / measure-|0>
/// experiment. The inverse preparation is conjugated by the residual
/// frame before application (the residual commutes with the sigma_z
/// measurement but not with the unpreparation). With quasistatic noise
/// the exact fidelity is the ensemble average over quasistatic_ensemble;
/// fidelity_sampled draws Binomial(shots, fidelity_exact)/shots from
/// mt19937_64(seed), or equals fidelity_exact when shots = 0.
ProtocolResult run_protocol(InitialState initial, const GateSequence &cycle, int cycles,
                            const NoiseModel &noise, const ProtocolOptions &opt, int shots,
                            uint64_t seed);

struct CurvePoint {
    int cycles;
    double time_ns;
    double fidelity_exact;
    double fidelity_sampled;
    int shots;
    uint64_t seed;
};

struct FidelityCurve {
    SequenceName sequence;
    CompilationStrategy strategy;
    double spacing_multiplier;
    InitialState initial_state;
    std::vector<CurvePoint> points;

    /// "asym"/"sym", or "none" for the pulse-free baseline.
    std::string strategy_label() const;
    /// e.g. "XY4:sym@1:plus_i".
    std::string label() const;
};

}  // namespace vzsim

#endif
