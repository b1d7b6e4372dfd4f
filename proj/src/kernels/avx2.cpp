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

// Compiled with -mavx2 and, deliberately, -mno-fma: without contraction
// the vec4 lanes execute the same add/sub/mul sequence as the scalar
// reference, so both backends agree bitwise and the dispatcher can pick
// either freely.

#include "rk4_kernel.hpp"

namespace vzsim::kern {

void rk4_batch_avx2(const TraceView &tr, const DissipationRates &g, StateBatch &b) {
    rk4_batch_impl<vec4>(tr, g, b);
}

}  // namespace vzsim::kern
