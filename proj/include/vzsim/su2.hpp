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

#ifndef VZSIM_SU2_HPP
#define VZSIM_SU2_HPP

#include <array>
#include <complex>
#include <numbers>

namespace vzsim {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2pi). Exact for inputs already in range.
double reduce_2pi(double x);

/// 2x2 complex matrix, row-major.
struct Mat2 {
    std::array<cplx, 4> a{};

    cplx &operator()(int r, int c) { return a[2 * r + c]; }
    const cplx &operator()(int r, int c) const { return a[2 * r + c]; }

    static Mat2 identity();
    static Mat2 zero();

    Mat2 operator*(const Mat2 &o) const;
    Mat2 operator*(cplx s) const;
    Mat2 operator+(const Mat2 &o) const;
    Mat2 operator-(const Mat2 &o) const;
    Mat2 adjoint() const;
    cplx trace() const;
    cplx det() const;

    /// max_{ij} |a_ij - b_ij|
    double max_abs_diff(const Mat2 &o) const;
    /// ||U^dag U - I||_max
    double unitarity_defect() const;
};

/// Pauli matrices.
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

/// Rotation about an axis in the (x,y) plane: axis angle phi, rotation
/// angle theta. phi is reduced mod 2pi at construction; theta keeps its
/// sign (R_x(-pi) and R_x(pi) are distinct drives even though their
/// unitaries agree up to global phase).
struct Rotation {
    double phi;
    double theta;

    Rotation(double phi_, double theta_) : phi(reduce_2pi(phi_)), theta(theta_) {}
};

struct BlochVector {
    double x, y, z;
};

/// exp[-i(theta/2)(cos(phi) sx + sin(phi) sy)] in closed form:
/// cos(theta/2) I - i sin(theta/2) (cos(phi) sx + sin(phi) sy).
Mat2 rotation_unitary(const Rotation &r);

/// diag(e^{-i a/2}, e^{+i a/2}).
Mat2 rz_unitary(double alpha);

/// True iff |Tr(u^dag v)| >= 2 - tol. Throws std::invalid_argument if
/// either input is non-unitary beyond 1e-9 (caller bug).
bool equal_up_to_global_phase(const Mat2 &u, const Mat2 &v, double tol = 1e-10);

/// r_alpha = Tr(rho sigma_alpha). rho must be Hermitian with unit trace
/// to within 1e-9.
BlochVector bloch_of(const Mat2 &rho);

}  // namespace vzsim

#endif
