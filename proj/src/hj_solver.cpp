// SPDX-License-Identifier: MIT
#include "sqbsde/hj_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sqbsde/csv.hpp"
#include "sqbsde/errors.hpp"
#include "sqbsde/quadrature.hpp"

namespace sqbsde {

namespace {

std::pair<std::size_t, double> bracket(const std::vector<double>& g, double v) {
    if (v <= g.front()) return {0, 0.0};
    if (v >= g.back()) return {g.size() - 2, 1.0};
    auto it = std::upper_bound(g.begin(), g.end(), v);
    std::size_t i = static_cast<std::size_t>(it - g.begin()) - 1;
    return {i, (v - g[i]) / (g[i + 1] - g[i])};
}

double bilinear(const PdeSolution& s, const std::vector<double>& f, double t, double x) {
    auto [li, lw] = bracket(s.t, t);
    auto [xi, xw] = bracket(s.x, x);
    const std::size_t n = s.x.size();
    auto at = [&](std::size_t l, std::size_t i) { return f[l * n + i]; };
    const double a = at(li, xi) + xw * (at(li, xi + 1) - at(li, xi));
    const double b = at(li + 1, xi) + xw * (at(li + 1, xi + 1) - at(li + 1, xi));
    return a + lw * (b - a);
}

void fill_z(const double* u, double* z, std::size_t n, double dx, double sigma) {
    for (std::size_t i = 1; i + 1 < n; ++i) z[i] = -sigma * (u[i + 1] - u[i - 1]) / (2.0 * dx);
    z[0] = -sigma * (u[1] - u[0]) / dx;
    z[n - 1] = -sigma * (u[n - 1] - u[n - 2]) / dx;
}

double drift_reach(const ForwardModel& model, double x0, double tau) {
    const Drift& b = model.drift();
    const double diffusive = 6.0 * std::abs(model.sigma()) * std::sqrt(tau);
    if (std::isfinite(b.b_bound())) return diffusive + b.b_bound() * tau;
    // Linear growth: Gronwall bound on the drift displacement.
    const double k = b.b_x_bound();
    return diffusive + (std::abs(x0) + diffusive) * std::expm1(k * tau);
}

PdeSolution solve_core(const ForwardModel& model, const Generator& gen, const TerminalCondition& tc,
                       const GridSpec& grid, double t0) {
    const double T = model.horizon();
    const double sigma = model.sigma();
    const std::size_t n = grid.n_x;
    const double tau_total = T - t0;
    const double dtr = tau_total / static_cast<double>(grid.n_t);

    PdeSolution sol;
    sol.sigma = sigma;
    sol.dx = (grid.x_hi - grid.x_lo) / static_cast<double>(n - 1);
    sol.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.x[i] = grid.x_lo + sol.dx * static_cast<double>(i);
    sol.x.back() = grid.x_hi;
    sol.t.resize(grid.n_t + 1);
    for (std::size_t j = 0; j <= grid.n_t; ++j) sol.t[j] = t0 + dtr * static_cast<double>(j);
    sol.t.back() = T;
    sol.u.assign((grid.n_t + 1) * n, 0.0);
    sol.z.assign((grid.n_t + 1) * n, 0.0);
    sol.cap_active.assign(grid.n_t + 1, 0);

    std::vector<double> u(n), un(n), bvals(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = tc(sol.x[i]);
    std::copy(u.begin(), u.end(), sol.u.begin() + static_cast<std::ptrdiff_t>(grid.n_t * n));

    const double dx = sol.dx;
    const double abs_sigma = std::abs(sigma);
    const double S = tc.sup_norm();
    const double c1 = 2.0 * std::exp(model.lambda() * T);
    const Regularity reg = tc.regularity();
    double lip_cap = std::numeric_limits<double>::infinity();
    if (reg.kind == RegularityKind::Lipschitz)
        lip_cap = grid.cap_safety * reg.lipschitz * std::exp(2.0 * model.b_x_bound() * T);
    auto cap_at = [&](double tau) {
        const double env = grid.cap_safety * c1 * S / (abs_sigma * std::sqrt(std::max(tau, dtr)));
        return std::min(env, lip_cap);
    };

    const bool time_dependent = model.drift().kind() == DriftKind::Custom;
    auto load_drift = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) bvals[i] = model.drift()(t, sol.x[i]);
    };
    load_drift(T);
    double bmax = 0.0;
    for (double v : bvals) bmax = std::max(bmax, std::abs(v));

    const double half_s2 = 0.5 * sigma * sigma;
    const double inv_dx = 1.0 / dx, inv_dx2 = inv_dx * inv_dx;
    auto H = [&](double p, double b) { return gen(sigma * p) - b * p; };

    double tau = 0.0;
    std::size_t substeps = 0;
    for (std::size_t j = 1; j <= grid.n_t; ++j) {
        const double target = dtr * static_cast<double>(j);
        bool capped = false;
        while (tau < target) {
            if (time_dependent) {
                load_drift(T - tau);
                bmax = 0.0;
                for (double v : bvals) bmax = std::max(bmax, std::abs(v));
            }
            const double cap = cap_at(tau);
            double theta;
            if (grid.dissipation == Dissipation::Envelope) {
                theta = abs_sigma * gen.max_slope(abs_sigma * cap) + bmax;
            } else {
                double pmax = 0.0;
                for (std::size_t i = 0; i + 1 < n; ++i)
                    pmax = std::max(pmax, std::abs(u[i + 1] - u[i]) * inv_dx);
                theta = abs_sigma * gen.max_slope(abs_sigma * std::min(pmax, cap)) + bmax;
            }
            double dtau = grid.cfl * dx * dx / (sigma * sigma + theta * dx);
            if (tau + dtau >= target - 1e-13 * tau_total) dtau = target - tau;

            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double pp = (u[i + 1] - u[i]) * inv_dx;
                const double pm = (u[i] - u[i - 1]) * inv_dx;
                double pc = 0.5 * (pp + pm);
                if (pc > cap) {
                    pc = cap;
                    capped = true;
                } else if (pc < -cap) {
                    pc = -cap;
                    capped = true;
                }
                const double diff = half_s2 * (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dx2;
                un[i] = u[i] + dtau * (diff - H(pc, bvals[i]) + 0.5 * theta * (pp - pm));
            }
            // Linear extension at both edges: no curvature, one-sided slope.
            {
                double p0 = std::clamp((u[1] - u[0]) * inv_dx, -cap, cap);
                double p1 = std::clamp((u[n - 1] - u[n - 2]) * inv_dx, -cap, cap);
                un[0] = u[0] - dtau * H(p0, bvals[0]);
                un[n - 1] = u[n - 1] - dtau * H(p1, bvals[n - 1]);
            }
            u.swap(un);
            tau = (dtau == target - tau) ? target : tau + dtau;
            if (++substeps > grid.max_substeps)
                throw ResolutionError("explicit scheme needs more than " +
                                      std::to_string(grid.max_substeps) +
                                      " sub-steps; coarsen dx or raise the ceiling");
        }
        tau = target;
        const std::size_t row = grid.n_t - j;
        std::copy(u.begin(), u.end(), sol.u.begin() + static_cast<std::ptrdiff_t>(row * n));
        sol.cap_active[row] = capped ? 1 : 0;
    }
    for (std::size_t l = 0; l <= grid.n_t; ++l)
        fill_z(&sol.u[l * n], &sol.z[l * n], n, dx, sigma);
    sol.substeps = substeps;
    return sol;
}

void validate(const ForwardModel& model, const TerminalCondition& tc, const GridSpec& grid,
              double t0) {
    if (grid.n_x < 64) throw std::invalid_argument("grid needs n_x >= 64");
    if (grid.n_t < 1) throw std::invalid_argument("grid needs n_t >= 1");
    if (!(grid.x_hi > grid.x_lo)) throw std::invalid_argument("grid needs x_hi > x_lo");
    if (!(t0 < model.horizon())) throw std::invalid_argument("t0 must be before the horizon");
    if (model.sigma() == 0.0) throw UnsupportedError("solver needs sigma != 0");
    if (!std::isfinite(tc.sup_norm())) throw std::invalid_argument("terminal data must be bounded");
    const double reach = drift_reach(model, grid.x0, model.horizon() - t0);
    if (grid.x0 - reach < grid.x_lo || grid.x0 + reach > grid.x_hi) {
        std::ostringstream os;
        os << "domain [" << grid.x_lo << ", " << grid.x_hi << "] does not cover x0 = " << grid.x0
           << " +/- " << reach << " (6 sigma sqrt(T - t0) plus drift range)";
        throw DomainError(os.str());
    }
}

}  // namespace

double PdeSolution::value(double tt, double xx) const { return bilinear(*this, u, tt, xx); }

double PdeSolution::z_value(double tt, double xx) const { return bilinear(*this, z, tt, xx); }

PdeSolution solve(const ForwardModel& model, const Generator& gen, const TerminalCondition& tc,
                  const GridSpec& grid, double t0) {
    validate(model, tc, grid, t0);
    PdeSolution sol = solve_core(model, gen, tc, grid, t0);

    if (grid.domain_check) {
        // Same coarse spacing on the given domain and on one 20% wider.
        GridSpec coarse = grid;
        coarse.domain_check = false;
        coarse.n_x = std::max<std::size_t>(65, (grid.n_x - 1) / 4 + 1);
        const double h = (grid.x_hi - grid.x_lo) / static_cast<double>(coarse.n_x - 1);
        GridSpec wide = coarse;
        const double pad = 0.1 * (grid.x_hi - grid.x_lo);
        const auto extra = static_cast<std::size_t>(std::ceil(pad / h));
        wide.x_lo = grid.x_lo - h * static_cast<double>(extra);
        wide.x_hi = grid.x_hi + h * static_cast<double>(extra);
        wide.n_x = coarse.n_x + 2 * extra;
        PdeSolution a = solve_core(model, gen, tc, coarse, t0);
        PdeSolution b = solve_core(model, gen, tc, wide, t0);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.n_x(); ++i) {
            if (std::abs(a.x[i] - grid.x0) > grid.window) continue;
            worst = std::max(worst, std::abs(a.u_at(0, i) - b.u_at(0, i + extra)));
        }
        if (worst > grid.domain_tol) {
            std::ostringstream os;
            os << "domain-warning: boundary influence " << worst
               << " inside the reporting window exceeds " << grid.domain_tol;
            sol.warnings.push_back(os.str());
        }
    }
    return sol;
}

std::vector<double> z_field(const PdeSolution& sol) { return sol.z; }

double cole_hopf_reference(const ForwardModel& model, const Generator& gen,
                           const TerminalCondition& tc, double t, double x, std::size_t nodes) {
    if (!model.drift().is_zero())
        throw UnsupportedError("Cole-Hopf reference needs zero drift");
    if (gen.kind() != GeneratorKind::Quadratic || gen.truncation())
        throw UnsupportedError("Cole-Hopf reference needs an untruncated quadratic generator");
    const double tau = model.horizon() - t;
    if (tau <= 0.0) return tc(x);
    const double k = 2.0 * gen.gamma();
    const double s = model.sigma() * std::sqrt(tau);
    const NormalRule& rule = normal_rule(nodes);
    std::vector<double> a(rule.nodes.size());
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = -k * tc(x + s * rule.nodes[i]);
        amax = std::max(amax, a[i]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += rule.weights[i] * std::exp(a[i] - amax);
    return -(amax + std::log(acc)) / k;
}

std::vector<PdeSolution> solve_regularized_family(const ForwardModel& model, const Generator& gen,
                                                  const TerminalCondition& tc,
                                                  const std::vector<double>& m_list, Side side,
                                                  const GridSpec& grid, double t0) {
    for (std::size_t i = 1; i < m_list.size(); ++i)
        if (!(m_list[i] > m_list[i - 1]))
            throw std::invalid_argument("m_list must be strictly increasing");
    std::vector<PdeSolution> out;
    out.reserve(m_list.size());
    for (double m : m_list) out.push_back(solve(model, gen, tc.regularized(m, side), grid, t0));
    return out;
}

void write_solution_csv(const PdeSolution& sol, std::ostream& os, std::size_t level_stride,
                        std::size_t x_stride) {
    level_stride = std::max<std::size_t>(1, level_stride);
    x_stride = std::max<std::size_t>(1, x_stride);
    CsvWriter w(os);
    w.header({"t", "x", "u", "z", "cap_active"});
    const std::size_t L = sol.n_levels();
    for (std::size_t l = 0; l < L; ++l) {
        if (l % level_stride != 0 && l + 1 != L) continue;
        for (std::size_t i = 0; i < sol.n_x(); ++i) {
            if (i % x_stride != 0 && i + 1 != sol.n_x()) continue;
            w.cell(sol.t[l]).cell(sol.x[i]).cell(sol.u_at(l, i)).cell(sol.z_at(l, i));
            w.cell(static_cast<long long>(sol.cap_active[l]));
            w.end_row();
        }
    }
}

}  // namespace sqbsde
