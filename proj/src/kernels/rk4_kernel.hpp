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

#ifndef VZSIM_KERNELS_RK4_KERNEL_HPP
#define VZSIM_KERNELS_RK4_KERNEL_HPP

#include "vzsim/kernels.hpp"

#include "vec.hpp"

namespace vzsim::kern {

// One RK4 sweep over the trace for V::width lanes starting at *p..*v.
// The Lindblad right-hand side in (p, q, u, v) coordinates, with
// H = (hx sx + hy sy + hz sz)/2, gamma1 amplitude damping and gamma_phi
// pure dephasing:
//   dp = g1 q - (hx v + hy u)
//   dq = (hx v + hy u) - g1 q
//   du = hz v - hy (q - p)/2 - (g1/2 + gphi) u
//   dv = -hz u - hx (q - p)/2 - (g1/2 + gphi) v
// The drive samples sit at dt/2 spacing, so step s reads samples
// 2s, 2s+1, 2s+2 for its begin/mid/end stages.
template <class V>
inline void rk4_lanes(const TraceView &tr, const DissipationRates &g, double *p, double *q,
                      double *u, double *v, const double *hz_off) {
    V P = V::load(p), Q = V::load(q), U = V::load(u), W = V::load(v);
    const V HZ = V::broadcast(tr.hz_base) + V::load(hz_off);
    const V G1 = V::broadcast(g.gamma1);
    const V GC = V::broadcast(0.5 * g.gamma1 + g.gamma_phi);
    const V HALF = V::broadcast(0.5);
    const V H = V::broadcast(tr.dt);
    const V H2 = V::broadcast(tr.dt / 2);
    const V H6 = V::broadcast(tr.dt / 6);
    const V TWO = V::broadcast(2.0);

    auto rhs = [&](V hx, V hy, V P_, V Q_, V U_, V W_, V &dP, V &dQ, V &dU, V &dW) {
        V drive = hx * W_ + hy * U_;
        V zdiff = (Q_ - P_) * HALF;
        V damp = G1 * Q_;
        dP = damp - drive;
        dQ = drive - damp;
        dU = HZ * W_ - hy * zdiff - GC * U_;
        dW = -(HZ * U_) - hx * zdiff - GC * W_;
    };

    for (size_t s = 0; s < tr.n_steps; s++) {
        const size_t k0 = 2 * s;
        const V hx0 = V::broadcast(tr.hx[k0]), hy0 = V::broadcast(tr.hy[k0]);
        const V hx1 = V::broadcast(tr.hx[k0 + 1]), hy1 = V::broadcast(tr.hy[k0 + 1]);
        const V hx2 = V::broadcast(tr.hx[k0 + 2]), hy2 = V::broadcast(tr.hy[k0 + 2]);

        V k1p, k1q, k1u, k1w;
        rhs(hx0, hy0, P, Q, U, W, k1p, k1q, k1u, k1w);
        V k2p, k2q, k2u, k2w;
        rhs(hx1, hy1, P + H2 * k1p, Q + H2 * k1q, U + H2 * k1u, W + H2 * k1w, k2p, k2q, k2u,
            k2w);
        V k3p, k3q, k3u, k3w;
        rhs(hx1, hy1, P + H2 * k2p, Q + H2 * k2q, U + H2 * k2u, W + H2 * k2w, k3p, k3q, k3u,
            k3w);
        V k4p, k4q, k4u, k4w;
        rhs(hx2, hy2, P + H * k3p, Q + H * k3q, U + H * k3u, W + H * k3w, k4p, k4q, k4u, k4w);

        P = P + H6 * (k1p + TWO * k2p + TWO * k3p + k4p);
        Q = Q + H6 * (k1q + TWO * k2q + TWO * k3q + k4q);
        U = U + H6 * (k1u + TWO * k2u + TWO * k3u + k4u);
        W = W + H6 * (k1w + TWO * k2w + TWO * k3w + k4w);
    }

    P.store(p);
    Q.store(q);
    U.store(u);
    W.store(v);
}

template <class V>
inline void rk4_batch_impl(const TraceView &tr, const DissipationRates &g, StateBatch &b) {
    size_t i = 0;
    for (; i + V::width <= b.size(); i += V::width) {
        rk4_lanes<V>(tr, g, &b.p[i], &b.q[i], &b.u[i], &b.v[i], &b.hz_offset[i]);
    }
    for (; i < b.size(); i++) {
        rk4_lanes<vec1>(tr, g, &b.p[i], &b.q[i], &b.u[i], &b.v[i], &b.hz_offset[i]);
    }
}

}  // namespace vzsim::kern

#endif
