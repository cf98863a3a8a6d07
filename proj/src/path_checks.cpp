// SPDX-License-Identifier: MIT
#include "sqbsde/path_checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sqbsde/errors.hpp"

namespace sqbsde {

ResidualReport bsde_residual(const PdeSolution& sol, const ForwardModel& model,
                             const Generator& gen, const TerminalCondition& tc,
                             const PathBundle& bundle) {
    (void)model;
    if (bundle.n_paths == 0) throw std::invalid_argument("empty path bundle");
    const std::size_t K = bundle.n_steps;
    const double dt = bundle.dt();
    if (bundle.times.front() < sol.t0() - 1e-12 || bundle.times.back() > sol.T() + 1e-12)
        throw std::invalid_argument("bundle times fall outside the solution grid");

    ResidualReport r;
    r.dt = dt;
    r.dx = sol.dx;
    double sum_sq = 0.0, e_mean = 0.0, e_m2 = 0.0;
    std::size_t excluded = 0, used = 0;
    for (std::size_t p = 0; p < bundle.n_paths; ++p) {
        bool inside = true;
        for (std::size_t k = 0; k <= K && inside; ++k) inside = sol.contains(bundle.x_at(p, k));
        if (!inside) {
            ++excluded;
            continue;
        }
        double y = sol.value(bundle.times[0], bundle.x_at(p, 0));
        double u_prev = y, energy = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double t = bundle.times[k];
            const double x = bundle.x_at(p, k);
            const double z = sol.z_value(t, x);
            const double dB = bundle.dB(p, k);
            const double drive = gen(z) * dt - z * dB;
            y += drive;
            energy += z * z * dt;
            const double u_next = sol.value(bundle.times[k + 1], bundle.x_at(p, k + 1));
            r.max_step_residual = std::max(r.max_step_residual, std::abs(u_next - u_prev - drive));
            u_prev = u_next;
        }
        const double res = y - tc(bundle.x_at(p, K));
        sum_sq += res * res;
        ++used;
        const double d = energy - e_mean;
        e_mean += d / static_cast<double>(used);
        e_m2 += d * (energy - e_mean);
    }
    r.excluded_fraction = static_cast<double>(excluded) / static_cast<double>(bundle.n_paths);
    if (r.excluded_fraction > 0.01) {
        std::ostringstream os;
        os << "paths leave the spatial grid: " << excluded << " of " << bundle.n_paths
           << " excluded (" << 100.0 * r.excluded_fraction << "% > 1%)";
        throw DomainError(os.str());
    }
    r.paths_used = used;
    r.rms_terminal_residual = std::sqrt(sum_sq / static_cast<double>(used));
    r.energy = e_mean;
    r.energy_se = used > 1 ? std::sqrt(e_m2 / static_cast<double>(used - 1) / static_cast<double>(used))
                           : 0.0;
    return r;
}

CheckResult bmo_energy_check(const ResidualReport& r, double sup_norm) {
    CheckResult c;
    c.statistic = r.energy;
    c.threshold = 4.0 * sup_norm * sup_norm + 3.0 * r.energy_se;
    c.pass = c.statistic <= c.threshold;
    return c;
}

namespace {

double report_dt(const PdeSolution& sol) { return sol.t[1] - sol.t[0]; }

template <class Lhs, class Bound>
EnvelopeReport envelope(const PdeSolution& sol, Lhs lhs, Bound bound) {
    EnvelopeReport r;
    const double T = sol.T();
    const double cutoff = 10.0 * report_dt(sol) * (1.0 - 1e-9);
    for (std::size_t l = 0; l < sol.n_levels(); ++l) {
        const double tau = T - sol.t[l];
        if (tau < cutoff) continue;
        const double a = lhs(l), b = bound(tau);
        const double ratio = b > 0.0 ? a / b : (a > 0.0 ? INFINITY : 0.0);
        ++r.levels_checked;
        if (r.levels_checked == 1 || ratio > r.worst_ratio) {
            r.worst_ratio = ratio;
            r.worst_t = sol.t[l];
            r.worst_lhs = a;
            r.worst_bound = b;
        }
    }
    r.pass = r.worst_ratio <= 1.0;
    return r;
}

double level_max_abs_z(const PdeSolution& sol, std::size_t l) {
    double m = 0.0;
    for (std::size_t i = 0; i < sol.n_x(); ++i) m = std::max(m, std::abs(sol.z_at(l, i)));
    return m;
}

}  // namespace

EnvelopeReport apriori_z_bound(const PdeSolution& sol, const ForwardModel& model, double sup_norm,
                               double safety_margin) {
    const double c1 = 2.0 * std::exp(model.lambda() * model.horizon());
    return envelope(
        sol, [&](std::size_t l) { return level_max_abs_z(sol, l); },
        [&](double tau) { return safety_margin * c1 * sup_norm / std::sqrt(tau); });
}

bool penalty_composite_convex(const Generator& gen, double r_max) {
    if (!gen.truncation() &&
        (gen.kind() == GeneratorKind::Power || gen.kind() == GeneratorKind::Quadratic))
        return true;  // (q - 1) r^q and gamma r^2
    if (gen.kind() == GeneratorKind::Sampled) r_max = std::min(r_max, gen.nodes().back().first);
    if (!(r_max > 0.0)) return true;
    constexpr int n = 256;
    const double h = r_max / n;
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = penalty_of_gradient(gen, h * i);
    for (int i = 1; i < n; ++i) {
        const double scale = std::max({1.0, std::abs(v[i - 1]), std::abs(v[i + 1])});
        if (v[i + 1] - 2.0 * v[i] + v[i - 1] < -1e-9 * scale) return false;
    }
    return true;
}

EnvelopeReport penalty_bound_check(const PdeSolution& sol, const Conjugate& conj, double sup_norm) {
    const Generator& gen = conj.source();
    double zmax = 0.0;
    for (double z : sol.z) zmax = std::max(zmax, std::abs(z));
    if (!penalty_composite_convex(gen, zmax)) {
        EnvelopeReport r;
        r.skipped = true;
        r.reason = "f(g'(z)) is not convex for " + gen.describe();
        return r;
    }
    return envelope(
        sol,
        [&](std::size_t l) {
            double m = 0.0;
            for (std::size_t i = 0; i < sol.n_x(); ++i)
                m = std::max(m, conj(gen.grad(sol.z_at(l, i)).value));
            return m;
        },
        [&](double tau) { return 2.0 * sup_norm / tau; });
}

ExponentFit exponent_fit(const PdeSolution& sol, double q, double tolerance) {
    ExponentFit f;
    f.target = -1.0 / q;
    const double T = sol.T();
    f.tau_lo = 10.0 * report_dt(sol);
    f.tau_hi = (T - sol.t0()) / 10.0;
    std::vector<double> xs, ys;
    bool any_nonzero = false;
    for (std::size_t l = 0; l < sol.n_levels(); ++l) {
        const double tau = T - sol.t[l];
        if (tau < f.tau_lo * (1.0 - 1e-9) || tau > f.tau_hi * (1.0 + 1e-9)) continue;
        const double m = level_max_abs_z(sol, l);
        if (m <= 0.0) continue;
        any_nonzero = true;
        xs.push_back(std::log(tau));
        ys.push_back(std::log(m));
    }
    if (!any_nonzero) throw NoFitError("Z vanishes on the fit window; nothing to fit");
    if (xs.size() < 3) throw NoFitError("fewer than three levels in the fit window");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) throw NoFitError("degenerate fit window");
    f.slope = sxy / sxx;
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - my - f.slope * (xs[i] - mx);
        sse += e * e;
    }
    f.stderr_ = std::sqrt(sse / (n - 2.0) / sxx);
    f.points = xs.size();
    f.pass = std::abs(f.slope - f.target) <= tolerance;
    return f;
}

double flow_identity_residual(const PdeSolution& sol, const PathBundle& bundle) {
    double worst = 0.0;
    for (std::size_t p = 0; p < bundle.n_paths; ++p)
        for (std::size_t k = 0; k <= bundle.n_steps; ++k) {
            const double t = bundle.times[k], x = bundle.x_at(p, k);
            if (!sol.contains(x)) continue;
            const double z = sol.z_value(t, x);
            const double ux = -z / sol.sigma;
            const double flow = bundle.flow_at(p, k);
            const double zpath = -ux * (1.0 / flow) * sol.sigma * flow;
            worst = std::max(worst, std::abs(zpath - z));
        }
    return worst;
}

}  // namespace sqbsde
