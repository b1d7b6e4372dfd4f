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

#include "vzsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace vzsim {
namespace {

constexpr double kNsPerUs = 1e3;

/// Closed-form least squares of f ~ a + b x with x_i = exp(-s_i / S);
/// returns the mean squared residual.
struct LinFit {
    double a, b, mse;
};

LinFit solve_ab(const std::vector<double> &s, const std::vector<double> &f, double S) {
    const size_t n = s.size();
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = std::exp(-s[i] / S);
        sx += x[i];
        sxx += x[i] * x[i];
        sy += f[i];
        sxy += x[i] * f[i];
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    LinFit out{};
    if (det <= 0.0 || !std::isfinite(det)) {
        // x numerically constant: absorb everything into the intercept.
        out.a = sy / nn;
        out.b = 0.0;
    } else {
        out.b = (nn * sxy - sx * sy) / det;
        out.a = (sy - out.b * sx) / nn;
    }
    double acc = 0;
    for (size_t i = 0; i < n; ++i) {
        const double r = f[i] - out.a - out.b * x[i];
        acc += r * r;
    }
    out.mse = acc / nn;
    return out;
}

}  // namespace

DecayFit fit_decay(const std::vector<double> &time_ns, const std::vector<double> &fidelity) {
    const size_t n = time_ns.size();
    if (n != fidelity.size())
        throw std::invalid_argument("fit_decay: time and fidelity lengths differ");
    if (n < 6) throw std::invalid_argument("fit_decay: need at least 6 points");
    const double t_max = *std::max_element(time_ns.begin(), time_ns.end());
    if (!(t_max > 0.0)) throw std::invalid_argument("fit_decay: max time must be positive");

    // Degenerate (constant) input has no decay constant.
    const auto [fmin, fmax] = std::minmax_element(fidelity.begin(), fidelity.end());
    if (*fmax - *fmin <= 1e-12) {
        double mean = 0;
        for (double f : fidelity) mean += f;
        mean /= static_cast<double>(n);
        return DecayFit{mean, 0.0, 0.0, 0.0, false};
    }

    // Normalized time: the candidate grid depends only on ratios t/t_max,
    // which makes the fit exactly scale-equivariant.
    std::vector<double> s(n);
    for (size_t i = 0; i < n; ++i) s[i] = time_ns[i] / t_max;

    const double u_lo = std::log(0.01), u_hi = std::log(100.0);
    int best_k = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 64; ++k) {
        const double u = u_lo + (u_hi - u_lo) * static_cast<double>(k) / 63.0;
        const double mse = solve_ab(s, fidelity, std::exp(u)).mse;
        if (mse < best_mse) {
            best_mse = mse;
            best_k = k;
        }
    }

    // Golden-section refinement on u = log(T_D / t_max) around the best
    // grid cell; terminates when the interval is exhausted, at which point
    // the relative residual improvement per step is far below 1e-10.
    const double du = (u_hi - u_lo) / 63.0;
    double lo = u_lo + du * static_cast<double>(std::max(0, best_k - 1));
    double hi = u_lo + du * static_cast<double>(std::min(63, best_k + 1));
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double gc = solve_ab(s, fidelity, std::exp(c)).mse;
    double gd = solve_ab(s, fidelity, std::exp(d)).mse;
    for (int it = 0; it < 160 && hi - lo > 1e-13; ++it) {
        if (gc < gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - gr * (hi - lo);
            gc = solve_ab(s, fidelity, std::exp(c)).mse;
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + gr * (hi - lo);
            gd = solve_ab(s, fidelity, std::exp(d)).mse;
        }
    }
    const double u_best = gc < gd ? c : d;
    const double S = std::exp(u_best);
    const LinFit fin = solve_ab(s, fidelity, S);
    return DecayFit{fin.a, fin.b, S * t_max / kNsPerUs, std::sqrt(fin.mse), true};
}

DecayFit fit_decay(const FidelityCurve &curve) {
    std::vector<double> t, f;
    t.reserve(curve.points.size());
    f.reserve(curve.points.size());
    for (const auto &p : curve.points) {
        t.push_back(p.time_ns);
        f.push_back(p.fidelity_exact);
    }
    return fit_decay(t, f);
}

OscillationMetric oscillation_metric(const std::vector<double> &time_ns,
                                     const std::vector<double> &fidelity, const DecayFit &fit) {
    const size_t n = time_ns.size();
    if (n != fidelity.size())
        throw std::invalid_argument("oscillation_metric: time and fidelity lengths differ");
    if (n < 4) throw std::invalid_argument("oscillation_metric: need at least 4 points");
    const double dt = time_ns[1] - time_ns[0];
    if (!(dt > 0.0)) throw std::invalid_argument("oscillation_metric: times must increase");
    for (size_t i = 1; i + 1 < n; ++i) {
        const double step = time_ns[i + 1] - time_ns[i];
        if (std::fabs(step - dt) > 1e-6 * dt)
            throw std::invalid_argument("oscillation_metric: non-uniform time sampling");
    }

    std::vector<double> r(n);
    for (size_t i = 0; i < n; ++i) {
        const double decay =
            fit.b == 0.0 ? 0.0 : fit.b * std::exp(-time_ns[i] / (fit.T_D_us * kNsPerUs));
        r[i] = fidelity[i] - fit.a - decay;
    }

    double best_mag2 = 0.0;
    size_t best_k = 0;
    for (size_t k = 1; k <= n / 2; ++k) {
        double re = 0, im = 0;
        for (size_t j = 0; j < n; ++j) {
            const double ang = kTwoPi * static_cast<double>(j * k) / static_cast<double>(n);
            re += r[j] * std::cos(ang);
            im -= r[j] * std::sin(ang);
        }
        const double mag2 = re * re + im * im;
        if (mag2 > best_mag2) {
            best_mag2 = mag2;
            best_k = k;
        }
    }
    if (best_k == 0) return OscillationMetric{0.0, 0.0};
    const double amp = 2.0 * std::sqrt(best_mag2) / static_cast<double>(n);
    const double period = static_cast<double>(n) * dt / static_cast<double>(best_k);
    return OscillationMetric{amp, period};
}

OscillationMetric oscillation_metric(const FidelityCurve &curve, const DecayFit &fit,
                                     bool sampled_mode) {
    std::vector<double> t, f;
    t.reserve(curve.points.size());
    f.reserve(curve.points.size());
    int shots = 0;
    for (const auto &p : curve.points) {
        t.push_back(p.time_ns);
        f.push_back(sampled_mode ? p.fidelity_sampled : p.fidelity_exact);
        shots = p.shots;
    }
    OscillationMetric m = oscillation_metric(t, f, fit);
    if (sampled_mode && shots > 0) {
        // Below the binomial noise floor an apparent oscillation is not
        // distinguishable from shot noise.
        const double floor = 3.0 / std::sqrt(static_cast<double>(shots));
        if (m.amplitude < floor) m = OscillationMetric{0.0, 0.0};
    }
    return m;
}

std::vector<OrderingRow> compare_decay_constants(
    const std::vector<std::pair<std::string, DecayFit>> &fits) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> groups;
    size_t n_converged = 0;
    for (const auto &[label, fit] : fits) {
        if (!fit.converged) continue;
        ++n_converged;
        if (groups.find(label) == groups.end()) order.push_back(label);
        groups[label].push_back(fit.T_D_us);
    }
    if (n_converged < 2)
        throw std::invalid_argument("compare_decay_constants: need at least 2 converged fits");

    std::vector<OrderingRow> out;
    for (size_t i = 0; i < order.size(); ++i) {
        for (size_t j = i + 1; j < order.size(); ++j) {
            const auto &va = groups[order[i]];
            const auto &vb = groups[order[j]];
            const size_t n = std::min(va.size(), vb.size());
            size_t wins = 0;
            for (size_t k = 0; k < n; ++k)
                if (va[k] >= vb[k]) ++wins;
            auto mean = [](const std::vector<double> &v) {
                double m = 0;
                for (double x : v) m += x;
                return m / static_cast<double>(v.size());
            };
            out.push_back(OrderingRow{order[i], order[j],
                                      n ? static_cast<double>(wins) / static_cast<double>(n) : 0.0,
                                      mean(va), mean(vb), n});
        }
    }
    return out;
}

}  // namespace vzsim
