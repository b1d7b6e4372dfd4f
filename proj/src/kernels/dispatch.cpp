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

#include "vzsim/kernels.hpp"

#include <stdexcept>

namespace vzsim::kern {

void rk4_batch_scalar(const TraceView &, const DissipationRates &, StateBatch &);
#ifdef VZSIM_BUILD_AVX2
void rk4_batch_avx2(const TraceView &, const DissipationRates &, StateBatch &);
#endif

namespace {

using Fn = void (*)(const TraceView &, const DissipationRates &, StateBatch &);

bool avx2_available() {
#ifdef VZSIM_BUILD_AVX2
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Fn pick_auto(const char **name) {
#ifdef VZSIM_BUILD_AVX2
    if (avx2_available()) {
        *name = "avx2";
        return rk4_batch_avx2;
    }
#endif
    *name = "scalar";
    return rk4_batch_scalar;
}

struct Dispatch {
    Fn fn;
    const char *name;
    Dispatch() { fn = pick_auto(&name); }
};

Dispatch &dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

void StateBatch::push_back(double p_, double q_, double u_, double v_, double hz_off) {
    p.push_back(p_);
    q.push_back(q_);
    u.push_back(u_);
    v.push_back(v_);
    hz_offset.push_back(hz_off);
}

void rk4_batch(const TraceView &trace, const DissipationRates &rates, StateBatch &batch) {
    dispatch().fn(trace, rates, batch);
}

std::string active_backend() {
    return dispatch().name;
}

void force_backend(const std::string &name) {
    if (name == "auto") {
        dispatch().fn = pick_auto(&dispatch().name);
        return;
    }
    if (name == "scalar") {
        dispatch().fn = rk4_batch_scalar;
        dispatch().name = "scalar";
        return;
    }
    if (name == "avx2") {
#ifdef VZSIM_BUILD_AVX2
        if (avx2_available()) {
            dispatch().fn = rk4_batch_avx2;
            dispatch().name = "avx2";
            return;
        }
#endif
        throw std::invalid_argument("force_backend: avx2 kernel unavailable on this machine");
    }
    throw std::invalid_argument("force_backend: unknown backend " + name);
}

}  // namespace vzsim::kern
