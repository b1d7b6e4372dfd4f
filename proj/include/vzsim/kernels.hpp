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

#ifndef VZSIM_KERNELS_HPP
#define VZSIM_KERNELS_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace vzsim::kern {

/// Shared drive coefficients on the half-step grid (2*n_steps+1 samples
/// each); hz_base is the common constant detuning, per-lane offsets live
/// in the batch.
struct TraceView {
    const double *hx;
    const double *hy;
    double hz_base;
    size_t n_steps;
    double dt;
};

/// Structure-of-arrays batch of density matrices
/// rho = [[p, u+iv], [u-iv, q]], one lane per (initial state, detuning
/// draw) pair. All lanes march through the same trace in lockstep.
struct StateBatch {
    std::vector<double> p, q, u, v;
    std::vector<double> hz_offset;

    size_t size() const { return p.size(); }
    void push_back(double p_, double q_, double u_, double v_, double hz_off);
};

struct DissipationRates {
    double gamma1;     // amplitude damping, 1/ns
    double gamma_phi;  // pure dephasing, 1/ns
};

/// Fixed-step RK4 over the whole trace, integrating every lane of the
/// batch in place. Dispatches to the best kernel for this CPU; all
/// kernels compute bit-identical results (the AVX2 variant is compiled
/// without FMA contraction precisely so its per-lane arithmetic matches
/// the scalar reference).
void rk4_batch(const TraceView &trace, const DissipationRates &rates, StateBatch &batch);

/// Name of the kernel rk4_batch currently dispatches to.
std::string active_backend();

/// Pin the kernel choice: "auto", "scalar", or "avx2". Throws if the
/// requested backend is unavailable on this machine/build.
void force_backend(const std::string &name);

}  // namespace vzsim::kern

#endif
