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

#include "vzsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vzsim/kernels.hpp"

namespace vzsim {
namespace {

/// 32-point Gauss-Hermite rule for weight e^{-x^2} (nodes, weights).
/// Frozen to full double precision; the moment identities sum(w) = sqrt(pi)
/// and sum(w x^2) = sqrt(pi)/2 are verified in tests.
constexpr double kGaussHermite32[32][2] = {
    {-7.12581390983072804e+00, 7.31067642738409573e-23},
    {-6.40949814926966077e+00, 9.23173653651825780e-19},
    {-5.81222594951591365e+00, 1.19734401709285026e-15},
    {-5.27555098651588050e+00, 4.21501021132641555e-13},
    {-4.77716450350259603e+00, 5.93329146339667624e-11},
    {-4.30554795335119866e+00, 4.09883216477087927e-09},
    {-3.85375548547144486e+00, 1.57416779254558817e-07},
    {-3.41716749281857091e+00, 3.65058512956237819e-06},
    {-2.99249082500237407e+00, 5.41658406181999070e-05},
    {-2.57724953773231746e+00, 5.36268365527972049e-04},
    {-2.16949918360611216e+00, 3.65489032665442621e-03},
    {-1.76765410946320145e+00, 1.75534288315734380e-02},
    {-1.37037641095287177e+00, 6.04581309559126881e-02},
    {-9.76500463589682788e-01, 1.51269734076642320e-01},
    {-5.84978765435932413e-01, 2.77458142302529964e-01},
    {-1.94840741569399345e-01, 3.75238352592802471e-01},
    {1.94840741569399345e-01, 3.75238352592802471e-01},
    {5.84978765435932413e-01, 2.77458142302529964e-01},
    {9.76500463589682788e-01, 1.51269734076642320e-01},
    {1.37037641095287177e+00, 6.04581309559126881e-02},
    {1.76765410946320145e+00, 1.75534288315734380e-02},
    {2.16949918360611216e+00, 3.65489032665442621e-03},
    {2.57724953773231746e+00, 5.36268365527972049e-04},
    {2.99249082500237407e+00, 5.41658406181999070e-05},
    {3.41716749281857091e+00, 3.65058512956237819e-06},
    {3.85375548547144486e+00, 1.57416779254558817e-07},
    {4.30554795335119866e+00, 4.09883216477087927e-09},
    {4.77716450350259603e+00, 5.93329146339667624e-11},
    {5.27555098651588050e+00, 4.21501021132641555e-13},
    {5.81222594951591365e+00, 1.19734401709285026e-15},
    {6.40949814926966077e+00, 9.23173653651825780e-19},
    {7.12581390983072804e+00, 7.31067642738409573e-23},
};

constexpr double kUsToNs = 1e3;
constexpr double kDriftLimit = 1e-8;
constexpr double kNegativityLimit = 1e-6;

double checked_rate(double t_us, const char *field) {
    if (std::isnan(t_us) || t_us <= 0.0) {
        std::ostringstream os;
        os << "NoiseModel." << field << " must be positive (use infinity to disable), got "
           << t_us;
        throw std::invalid_argument(os.str());
    }
    return 1.0 / (t_us * kUsToNs);  // 1/inf == 0 disables the channel
}

/// Exact (p, q, u, v) components of |s><s|.
struct Pquv {
    double p, q, u, v;
};

Pquv initial_pquv(InitialState s) {
    switch (s) {
        case InitialState::zero:
            return {1.0, 0.0, 0.0, 0.0};
        case InitialState::plus:
            return {0.5, 0.5, 0.5, 0.0};
        case InitialState::plus_i:
            return {0.5, 0.5, 0.0, -0.5};
        case InitialState::minus_i:
            return {0.5, 0.5, 0.0, 0.5};
    }
    throw std::logic_error("initial_pquv: unreachable");
}

/// Pulse-level preparation |0> -> |s> and its inverse, both in time order.
/// Built from the native set: sqrt(X) pulses plus virtual-Z, so "physical
/// preparation" exercises the same drive imperfections as the sequence.
std::vector<Gate> prep_gates(InitialState s, bool inverse) {
    const double half = inverse ? -0.5 * kPi : 0.5 * kPi;
    switch (s) {
        case InitialState::zero:
            return {};
        case InitialState::plus_i:
            // |+i> = R_x(-pi/2)|0>
            return {PhysicalPulseGate{Rotation(0.0, -half)}};
        case InitialState::minus_i:
            return {PhysicalPulseGate{Rotation(0.0, half)}};
        case InitialState::plus:
            // R_y(pi/2) expressed as Rz(pi/2) R_x(pi/2) Rz(-pi/2).
            return {VirtualZ{-0.5 * kPi}, PhysicalPulseGate{Rotation(0.0, half)},
                    VirtualZ{0.5 * kPi}};
    }
    throw std::logic_error("prep_gates: unreachable");
}

/// Read a lane back as a density matrix, enforcing the integration
/// invariants, and renormalize the benign trace rounding away.
Mat2 lane_density(const kern::StateBatch &batch, size_t i, const char *context) {
    const double p = batch.p[i], q = batch.q[i], u = batch.u[i], v = batch.v[i];
    const double drift = std::abs(p + q - 1.0);
    if (drift > kDriftLimit) {
        std::ostringstream os;
        os << context << ": integration failure, trace drift " << drift
           << " exceeds 1e-8; reduce dt_ns";
        throw std::runtime_error(os.str());
    }
    const double min_eig = 0.5 * (p + q) - std::hypot(0.5 * (p - q), std::hypot(u, v));
    if (min_eig < -kNegativityLimit) {
        std::ostringstream os;
        os << context << ": integration failure, eigenvalue " << min_eig
           << " below -1e-6; reduce dt_ns";
        throw std::runtime_error(os.str());
    }
    const double inv_tr = 1.0 / (p + q);
    Mat2 rho;
    rho(0, 0) = p * inv_tr;
    rho(1, 1) = q * inv_tr;
    rho(0, 1) = cplx(u, v) * inv_tr;
    rho(1, 0) = cplx(u, -v) * inv_tr;
    // RK4 can land a benign hair outside the Bloch sphere. Clip the
    // negative eigenvalue by projecting onto the upper eigenvector,
    // (rho - lam_min I) / (lam_max - lam_min): the nearest unit-trace
    // PSD matrix, so every returned state is physical.
    const double gap = std::hypot(0.5 * (rho(0, 0).real() - rho(1, 1).real()),
                                  std::abs(rho(0, 1)));
    const double lam_min = 0.5 - gap;
    if (lam_min < 0.0) {
        const double inv_span = 1.0 / (2.0 * gap);
        rho(0, 0) = (rho(0, 0) - lam_min) * inv_span;
        rho(1, 1) = (rho(1, 1) - lam_min) * inv_span;
        rho(0, 1) = rho(0, 1) * inv_span;
        rho(1, 0) = rho(1, 0) * inv_span;
    }
    return rho;
}

/// P(measure |0>) after undoing the residual frame and the ideal
/// preparation: <0| U_p^dag Rz(c) rho Rz(c)^dag U_p |0>.
double survival_ideal_prep(const Mat2 &rho, double residual, InitialState initial) {
    const Mat2 rz = rz_unitary(residual);
    const Mat2 up = prep_unitary(initial);
    const Mat2 m = up.adjoint() * (rz * rho * rz.adjoint()) * up;
    return m(0, 0).real();
}

}  // namespace

double NoiseModel::gamma1() const { return checked_rate(T1_us, "T1_us"); }

double NoiseModel::gamma_phi() const { return checked_rate(Tphi_us, "Tphi_us"); }

double NoiseModel::eps_err(double t_g_ns) const {
    if (!(t_g_ns > 0.0)) throw std::invalid_argument("eps_err: t_g_ns must be positive");
    return delta_theta_rad / t_g_ns;
}

double NoiseModel::del_err(double t_g_ns) const {
    if (!(t_g_ns > 0.0)) throw std::invalid_argument("del_err: t_g_ns must be positive");
    return delta_phi_rad * kPi / t_g_ns;
}

InitialState parse_initial_state(const std::string &s) {
    if (s == "plus_i") return InitialState::plus_i;
    if (s == "minus_i") return InitialState::minus_i;
    if (s == "plus") return InitialState::plus;
    if (s == "zero") return InitialState::zero;
    throw std::invalid_argument("unknown initial state (want plus_i|minus_i|plus|zero): " + s);
}

std::string to_string(InitialState s) {
    switch (s) {
        case InitialState::plus_i:
            return "plus_i";
        case InitialState::minus_i:
            return "minus_i";
        case InitialState::plus:
            return "plus";
        case InitialState::zero:
            return "zero";
    }
    throw std::logic_error("to_string(InitialState): unreachable");
}

Mat2 prep_unitary(InitialState s) {
    switch (s) {
        case InitialState::zero:
            return Mat2::identity();
        case InitialState::plus_i:
            return rotation_unitary(Rotation(0.0, -0.5 * kPi));
        case InitialState::minus_i:
            return rotation_unitary(Rotation(0.0, 0.5 * kPi));
        case InitialState::plus:
            return rotation_unitary(Rotation(0.5 * kPi, 0.5 * kPi));
    }
    throw std::logic_error("prep_unitary: unreachable");
}

void validate_density(const Mat2 &rho, double tr_tol, double neg_tol, const char *context) {
    const double herm =
        std::max({std::abs(rho(0, 0).imag()), std::abs(rho(1, 1).imag()),
                  std::abs(rho(0, 1) - std::conj(rho(1, 0)))});
    if (herm > 1e-10) {
        std::ostringstream os;
        os << context << ": density matrix not Hermitian (defect " << herm << ")";
        throw std::invalid_argument(os.str());
    }
    const double drift = std::abs(rho.trace() - cplx(1.0));
    if (drift > tr_tol) {
        std::ostringstream os;
        os << context << ": density matrix trace off by " << drift;
        throw std::invalid_argument(os.str());
    }
    const double p = rho(0, 0).real(), q = rho(1, 1).real();
    const double min_eig = 0.5 * (p + q) - std::hypot(0.5 * (p - q), std::abs(rho(0, 1)));
    if (min_eig < -neg_tol) {
        std::ostringstream os;
        os << context << ": density matrix has eigenvalue " << min_eig;
        throw std::invalid_argument(os.str());
    }
}

Mat2 evolve(const Mat2 &rho0, const HamiltonianTrace &trace, const NoiseModel &noise) {
    validate_density(rho0, 1e-9, 1e-9, "evolve: initial state");
    kern::StateBatch batch;
    batch.push_back(rho0(0, 0).real(), rho0(1, 1).real(), rho0(0, 1).real(), rho0(0, 1).imag(),
                    0.0);
    const kern::TraceView view{trace.hx.data(), trace.hy.data(), trace.hz, trace.n_steps(),
                               trace.dt_ns};
    kern::rk4_batch(view, {noise.gamma1(), noise.gamma_phi()}, batch);
    return lane_density(batch, 0, "evolve");
}

std::vector<std::pair<double, double>> quasistatic_ensemble(double sigma) {
    if (std::isnan(sigma) || sigma < 0.0)
        throw std::invalid_argument("quasistatic_ensemble: sigma must be >= 0");
    if (sigma == 0.0) return {{0.0, 1.0}};
    std::vector<std::pair<double, double>> out;
    out.reserve(32);
    const double scale = std::sqrt(2.0) * sigma;
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    for (const auto &nw : kGaussHermite32) out.emplace_back(scale * nw[0], nw[1] * inv_sqrt_pi);
    return out;
}

ProtocolResult run_protocol(InitialState initial, const GateSequence &cycle, int cycles,
                            const NoiseModel &noise, const ProtocolOptions &opt, int shots,
                            uint64_t seed) {
    if (cycles < 0) throw std::invalid_argument("run_protocol: cycles must be >= 0");
    if (shots < 0) throw std::invalid_argument("run_protocol: shots must be >= 0");

    GateSequence seq;
    seq.name = cycle.name;
    seq.gates.reserve(cycle.gates.size() * static_cast<size_t>(cycles) + 8);
    if (opt.physical_prep) {
        for (const auto &g : prep_gates(initial, /*inverse=*/false)) seq.gates.push_back(g);
    }
    for (int c = 0; c < cycles; ++c)
        seq.gates.insert(seq.gates.end(), cycle.gates.begin(), cycle.gates.end());
    if (opt.physical_prep) {
        for (const auto &g : prep_gates(initial, /*inverse=*/true)) seq.gates.push_back(g);
    }

    const ScheduleConfig timing{opt.tau_ns * opt.spacing_multiplier, opt.t_g_ns};
    const PulseSchedule sched = fold(seq, timing);
    const DriveField field = lower(sched, opt.shape, noise.interference, opt.dt_ns);
    const HamiltonianTrace trace =
        inject_coherent_errors(field, noise.eps_err(opt.t_g_ns), noise.del_err(opt.t_g_ns));

    const Pquv s0 = opt.physical_prep ? initial_pquv(InitialState::zero) : initial_pquv(initial);
    const auto ensemble = quasistatic_ensemble(noise.quasistatic_sigma);
    kern::StateBatch batch;
    for (const auto &[delta, w] : ensemble) batch.push_back(s0.p, s0.q, s0.u, s0.v, delta);

    const kern::TraceView view{trace.hx.data(), trace.hy.data(), trace.hz, trace.n_steps(),
                               trace.dt_ns};
    kern::rk4_batch(view, {noise.gamma1(), noise.gamma_phi()}, batch);

    double f = 0.0;
    for (size_t i = 0; i < ensemble.size(); ++i) {
        const Mat2 rho = lane_density(batch, i, "run_protocol");
        const double p0 = opt.physical_prep
                              ? rho(0, 0).real()
                              : survival_ideal_prep(rho, sched.residual_frame, initial);
        f += ensemble[i].second * p0;
    }
    f = std::clamp(f, 0.0, 1.0);

    double fs = f;
    if (shots > 0) {
        std::mt19937_64 rng(seed);
        int k = 0;
        for (int s = 0; s < shots; ++s) {
            // 53-bit uniform in [0, 1), the usual (x >> 11) * 2^-53 map.
            const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (x < f) ++k;
        }
        fs = static_cast<double>(k) / static_cast<double>(shots);
    }
    return {f, fs};
}

std::string FidelityCurve::strategy_label() const {
    if (sequence == SequenceName::FREE) return "none";
    return vzsim::to_string(strategy);
}

std::string FidelityCurve::label() const {
    std::ostringstream os;
    os << vzsim::to_string(sequence);
    if (sequence != SequenceName::FREE) os << ":" << vzsim::to_string(strategy);
    os << "@" << spacing_multiplier << ":" << vzsim::to_string(initial_state);
    return os.str();
}

}  // namespace vzsim
