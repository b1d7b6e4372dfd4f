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

#include "vzsim/su2.hpp"

#include <cmath>
#include <stdexcept>

namespace vzsim {

double reduce_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    // fmod can return exactly 2pi-eps rounding up to 2pi after the add.
    if (r >= kTwoPi) {
        r -= kTwoPi;
    }
    return r;
}

Mat2 Mat2::identity() {
    return Mat2{{cplx(1), cplx(0), cplx(0), cplx(1)}};
}

Mat2 Mat2::zero() {
    return Mat2{};
}

Mat2 Mat2::operator*(const Mat2 &o) const {
    Mat2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
        }
    }
    return r;
}

Mat2 Mat2::operator*(cplx s) const {
    Mat2 r = *this;
    for (auto &e : r.a) {
        e *= s;
    }
    return r;
}

Mat2 Mat2::operator+(const Mat2 &o) const {
    Mat2 r = *this;
    for (int k = 0; k < 4; k++) {
        r.a[k] += o.a[k];
    }
    return r;
}

Mat2 Mat2::operator-(const Mat2 &o) const {
    Mat2 r = *this;
    for (int k = 0; k < 4; k++) {
        r.a[k] -= o.a[k];
    }
    return r;
}

Mat2 Mat2::adjoint() const {
    Mat2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            r(i, j) = std::conj((*this)(j, i));
        }
    }
    return r;
}

cplx Mat2::trace() const {
    return a[0] + a[3];
}

cplx Mat2::det() const {
    return a[0] * a[3] - a[1] * a[2];
}

double Mat2::max_abs_diff(const Mat2 &o) const {
    double m = 0;
    for (int k = 0; k < 4; k++) {
        m = std::max(m, std::abs(a[k] - o.a[k]));
    }
    return m;
}

double Mat2::unitarity_defect() const {
    return (adjoint() * (*this)).max_abs_diff(Mat2::identity());
}

Mat2 pauli_x() {
    return Mat2{{cplx(0), cplx(1), cplx(1), cplx(0)}};
}

Mat2 pauli_y() {
    return Mat2{{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}};
}

Mat2 pauli_z() {
    return Mat2{{cplx(1), cplx(0), cplx(0), cplx(-1)}};
}

Mat2 rotation_unitary(const Rotation &r) {
    double c = std::cos(r.theta / 2);
    double s = std::sin(r.theta / 2);
    cplx e_m = std::polar(1.0, -r.phi);  // e^{-i phi}
    cplx e_p = std::polar(1.0, +r.phi);
    // cos(t/2) I - i sin(t/2) (cos(phi) sx + sin(phi) sy); the off-diagonal
    // of cos(phi) sx + sin(phi) sy is e^{-i phi} (top) / e^{+i phi} (bottom).
    Mat2 u;
    u(0, 0) = cplx(c);
    u(0, 1) = cplx(0, -s) * e_m;
    u(1, 0) = cplx(0, -s) * e_p;
    u(1, 1) = cplx(c);
    return u;
}

Mat2 rz_unitary(double alpha) {
    Mat2 u;
    u(0, 0) = std::polar(1.0, -alpha / 2);
    u(1, 1) = std::polar(1.0, +alpha / 2);
    return u;
}

bool equal_up_to_global_phase(const Mat2 &u, const Mat2 &v, double tol) {
    if (u.unitarity_defect() > 1e-9 || v.unitarity_defect() > 1e-9) {
        throw std::invalid_argument("equal_up_to_global_phase: non-unitary input");
    }
    return std::abs((u.adjoint() * v).trace()) >= 2.0 - tol;
}

BlochVector bloch_of(const Mat2 &rho) {
    if (std::abs(rho.trace() - cplx(1)) > 1e-9 || rho.max_abs_diff(rho.adjoint()) > 1e-9) {
        throw std::invalid_argument("bloch_of: not a unit-trace Hermitian matrix");
    }
    return BlochVector{
        2 * rho(0, 1).real(),
        -2 * rho(0, 1).imag(),
        rho(0, 0).real() - rho(1, 1).real(),
    };
}

}  // namespace vzsim
