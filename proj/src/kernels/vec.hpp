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

#ifndef VZSIM_KERNELS_VEC_HPP
#define VZSIM_KERNELS_VEC_HPP

#ifdef __AVX2__
#include <immintrin.h>
#endif

namespace vzsim::kern {

// Lane wrappers presenting one arithmetic surface to the RK4 kernel
// template. Only +, -, * are exposed: every kernel instantiation then
// performs the identical IEEE operation sequence per lane, which is what
// makes the scalar and AVX2 backends agree bitwise (the AVX2 translation
// unit is built with FMA contraction disabled for the same reason).

struct vec1 {
    double v;
    static constexpr int width = 1;
    static vec1 load(const double *p) { return {*p}; }
    static vec1 broadcast(double x) { return {x}; }
    void store(double *p) const { *p = v; }
    friend vec1 operator+(vec1 a, vec1 b) { return {a.v + b.v}; }
    friend vec1 operator-(vec1 a, vec1 b) { return {a.v - b.v}; }
    friend vec1 operator*(vec1 a, vec1 b) { return {a.v * b.v}; }
    friend vec1 operator-(vec1 a) { return {0.0 - a.v}; }
};

#ifdef __AVX2__
struct vec4 {
    __m256d v;
    static constexpr int width = 4;
    static vec4 load(const double *p) { return {_mm256_loadu_pd(p)}; }
    static vec4 broadcast(double x) { return {_mm256_set1_pd(x)}; }
    void store(double *p) const { _mm256_storeu_pd(p, v); }
    friend vec4 operator+(vec4 a, vec4 b) { return {_mm256_add_pd(a.v, b.v)}; }
    friend vec4 operator-(vec4 a, vec4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
    friend vec4 operator*(vec4 a, vec4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
    friend vec4 operator-(vec4 a) { return {_mm256_sub_pd(_mm256_setzero_pd(), a.v)}; }
};
#endif

}  // namespace vzsim::kern

#endif
