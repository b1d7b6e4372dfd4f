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

#include "vzsim/pulse_lowering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vzsim {

namespace {

// Composite-Simpson weight of sample k on the half-step grid: each RK4
// step spans samples (2s, 2s+1, 2s+2) with weights dt*(1,4,1)/6, interior
// step boundaries being shared. This is exactly the quadrature a fixed-
// axis drive experiences through RK4, which is what makes the discrete
// calibration below hit nominal angles to rounding.
double quad_weight(size_t k, size_t n_samples, double dt) {
    if (k % 2 == 1) {
        return dt * (4.0 / 6.0);
    }
    if (k == 0 || k + 1 == n_samples) {
        return dt / 6.0;
    }
    return dt * (2.0 / 6.0);
}

double core_half_width(const PulseShape &shape) {
    if (const auto *g = std::get_if<GaussianEnvelope>(&shape.envelope)) {
        return g->truncation_window_ns;
    }
    return shape.t_g_ns / 2;
}

// Unnormalized envelope value at offset `off` from the peak, zero outside
// +-w. `continued` evaluates the bare Gaussian past its window (used for
// interference tails); a cosine ramp is already zero there.
double envelope_value(const Envelope &env, double t_g, double off, bool continued = false) {
    if (const auto *g = std::get_if<GaussianEnvelope>(&env)) {
        const double gv = std::exp(-off * off / (2 * g->sigma_ns * g->sigma_ns));
        if (continued) {
            return gv;
        }
        const double w = g->truncation_window_ns;
        if (std::fabs(off) > w) {
            return 0;
        }
        // Truncated-and-shifted: subtracting the edge value makes the core
        // reach zero continuously at the window, so touching pulses hand
        // off without a field discontinuity on any sampling grid (a value
        // jump at a shared sample costs the integrator an O(dt) defect).
        return gv - std::exp(-w * w / (2 * g->sigma_ns * g->sigma_ns));
    }
    double w = t_g / 2;
    if (std::fabs(off) > w) {
        return 0;
    }
    return 0.5 * (1 + std::cos(kPi * off / w));
}

// Proximity factor for truncation tails: 1 when cores touch (neighbor at
// distance t_g), linearly down to 0 at distance t_g + 4*extension. An
// absent neighbor counts as infinitely far, which reduces TailOverlap to
// NoInterference exactly.
double tail_scale(double neighbor_dist, double t_g, double ext) {
    double s = (t_g + 4 * ext - neighbor_dist) / (4 * ext);
    return std::clamp(s, 0.0, 1.0);
}

void check_on_grid(double value, double grid, const char *what) {
    double r = value / grid;
    if (std::fabs(r - std::llround(r)) * grid > 1e-6) {
        throw std::invalid_argument(std::string("lower: ") + what +
                                    " does not sit on the sampling grid");
    }
}

}  // namespace

PulseShape PulseShape::gaussian(double t_g_ns) {
    return PulseShape{t_g_ns, GaussianEnvelope{t_g_ns / 4, t_g_ns / 2}};
}

PulseShape PulseShape::cosine_ramp(double t_g_ns) {
    return PulseShape{t_g_ns, CosineRampEnvelope{}};
}

DriveField lower(const PulseSchedule &s, const PulseShape &shape,
                 const InterferenceModel &interference, double dt_ns) {
    if (dt_ns <= 0) {
        throw std::invalid_argument("lower: dt_ns must be positive");
    }
    const double half = dt_ns / 2;
    const double span = s.total_duration_ns;
    check_on_grid(span, dt_ns, "total duration");
    const size_t n_steps = (size_t)std::llround(span / dt_ns);
    const size_t n_samp = 2 * n_steps + 1;

    DriveField out;
    out.dt_ns = dt_ns;
    out.span_ns = span;
    out.samples.assign(n_samp, cplx(0));
    out.pulse_active.assign(n_samp, 0);

    const double w = core_half_width(shape);
    const size_t n_pulses = s.pulses.size();

    // Per-pulse peaks and core sample ranges.
    std::vector<double> peaks(n_pulses);
    for (size_t i = 0; i < n_pulses; i++) {
        const PhysicalPulse &p = s.pulses[i];
        if (std::fabs(p.duration_ns - shape.t_g_ns) > 1e-6) {
            throw std::invalid_argument("lower: pulse duration disagrees with shape t_g");
        }
        peaks[i] = p.start_ns + p.duration_ns / 2;
        check_on_grid(peaks[i], half, "pulse peak");
        if (i > 0 && peaks[i] - peaks[i - 1] < shape.t_g_ns - 1e-9) {
            throw std::invalid_argument("lower: pulse cores overlap (separation < t_g)");
        }
    }

    auto clamp_lo = [&](double t) -> long {
        return std::max(0L, (long)std::ceil(t / half - 1e-9));
    };
    auto clamp_hi = [&](double t) -> long {
        return std::min((long)n_samp - 1, (long)std::floor(t / half + 1e-9));
    };

    for (size_t i = 0; i < n_pulses; i++) {
        const PhysicalPulse &p = s.pulses[i];
        const double peak = peaks[i];
        const long lo = clamp_lo(peak - w);
        const long hi = clamp_hi(peak + w);

        // Discrete calibration: the amplitude is normalized by the grid
        // quadrature of the actual samples, not the continuous integral,
        // so the integrator realizes the nominal angle to rounding.
        double area = 0;
        for (long k = lo; k <= hi; k++) {
            area += quad_weight(k, n_samp, dt_ns) *
                    envelope_value(shape.envelope, shape.t_g_ns, k * half - peak);
        }
        if (area <= 0) {
            throw std::invalid_argument("lower: pulse envelope has no support on the grid");
        }
        const double amp = p.angle / area;
        const cplx phase_factor = std::polar(1.0, p.phase);

        for (long k = lo; k <= hi; k++) {
            out.samples[k] += amp * envelope_value(shape.envelope, shape.t_g_ns, k * half - peak) *
                              phase_factor;
            out.pulse_active[k] = 1;
        }

        if (const auto *tails = std::get_if<TailOverlap>(&interference)) {
            const double ext = tails->extension_ns;
            const auto *g = std::get_if<GaussianEnvelope>(&shape.envelope);
            if (ext > 0 && g != nullptr) {
                // Tails use the continuum amplitude, not the discrete
                // calibration: `amp` carries an O(dt) grid correction that
                // cancels for the calibrated cores but would otherwise leak
                // into the uncalibrated tail area and spoil dt convergence.
                // The continuum area is that of the truncated-and-shifted
                // core envelope.
                const double edge = std::exp(-w * w / (2 * g->sigma_ns * g->sigma_ns));
                const double cont = g->sigma_ns * std::sqrt(2 * kPi) *
                                        std::erf(w / (g->sigma_ns * std::sqrt(2.0))) -
                                    2 * w * edge;
                const double amp_tail = p.angle / cont;
                const double d_left = i > 0 ? peak - peaks[i - 1]
                                            : std::numeric_limits<double>::infinity();
                const double d_right = i + 1 < n_pulses ? peaks[i + 1] - peak
                                                        : std::numeric_limits<double>::infinity();
                const double side[2][3] = {
                    // {scale, range lo, range hi}
                    {tail_scale(d_left, shape.t_g_ns, ext), peak - w - ext, peak - w},
                    {tail_scale(d_right, shape.t_g_ns, ext), peak + w, peak + w + ext},
                };
                for (const auto &sd : side) {
                    if (sd[0] <= 0) {
                        continue;
                    }
                    long tlo = clamp_lo(sd[1]);
                    long thi = clamp_hi(sd[2]);
                    for (long k = tlo; k <= thi; k++) {
                        double off = k * half - peak;
                        if (std::fabs(off) <= w) {
                            continue;  // core sample, already counted
                        }
                        // sin^2 bump window: zero value and slope at both the
                        // core edge and the cutoff. The cores are calibrated
                        // against the grid quadrature, but the tails are not
                        // (they are the injected error), so their sampled
                        // area has to converge on its own; a window with a
                        // nonzero endpoint would leave an O(dt) area defect
                        // at every junction.
                        double win = std::sin(kPi * (std::fabs(off) - w) / ext);
                        win *= win;
                        out.samples[k] += sd[0] * amp_tail * win *
                                          envelope_value(shape.envelope, shape.t_g_ns, off, true) *
                                          phase_factor;
                    }
                }
            }
        } else if (const auto *echo = std::get_if<EchoReflection>(&interference)) {
            const double epk = peak + echo->delay_ns;
            const cplx epf = std::polar(1.0, p.phase + echo->phase_shift_rad);
            long elo = clamp_lo(epk - w);
            long ehi = clamp_hi(epk + w);
            for (long k = elo; k <= ehi; k++) {
                out.samples[k] += echo->reflection_amplitude * amp *
                                  envelope_value(shape.envelope, shape.t_g_ns, k * half - epk) *
                                  epf;
            }
        }
    }
    return out;
}

HamiltonianTrace inject_coherent_errors(const DriveField &field, double eps_err, double del_err) {
    HamiltonianTrace tr;
    tr.dt_ns = field.dt_ns;
    tr.span_ns = field.span_ns;
    tr.hz = del_err;
    tr.hx.resize(field.samples.size());
    tr.hy.resize(field.samples.size());
    for (size_t k = 0; k < field.samples.size(); k++) {
        tr.hx[k] = field.samples[k].real() + (field.pulse_active[k] ? eps_err : 0.0);
        tr.hy[k] = field.samples[k].imag();
    }
    return tr;
}

cplx field_area(const DriveField &field) {
    cplx a(0);
    for (size_t k = 0; k < field.samples.size(); k++) {
        a += quad_weight(k, field.samples.size(), field.dt_ns) * field.samples[k];
    }
    return a;
}

}  // namespace vzsim
