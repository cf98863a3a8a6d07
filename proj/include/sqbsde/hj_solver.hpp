// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "sqbsde/forward_model.hpp"
#include "sqbsde/generators.hpp"
#include "sqbsde/terminal_data.hpp"

namespace sqbsde {

enum class Dissipation {
    Envelope,  // theta from the capped gradient range, fixed per sub-step
    Adaptive   // theta from the gradients present on the current level
};

struct GridSpec {
    double x_lo = -8.0;
    double x_hi = 8.0;
    std::size_t n_x = 1601;
    std::size_t n_t = 100;       // reporting intervals between t0 and T
    double x0 = 0.0;             // evaluation point the domain must cover
    double window = 3.0;         // half-width of the reporting window around x0
    bool domain_check = false;   // coarse rerun on a 20% wider domain
    double domain_tol = 1e-3;
    double cap_safety = 1.5;
    double cfl = 0.9;
    std::size_t max_substeps = 20'000'000;
    Dissipation dissipation = Dissipation::Adaptive;
};

class PdeSolution {
public:
    std::vector<double> x;  // n_x points
    std::vector<double> t;  // increasing, t.front() = t0, t.back() = T
    std::vector<double> u;  // (n_t + 1) x n_x, row per level
    std::vector<double> z;  // same layout, z = -u_x sigma
    std::vector<char> cap_active;
    double dx = 0.0;
    double sigma = 1.0;
    std::size_t substeps = 0;
    std::vector<std::string> warnings;

    std::size_t n_x() const noexcept { return x.size(); }
    std::size_t n_levels() const noexcept { return t.size(); }
    double t0() const { return t.front(); }
    double T() const { return t.back(); }
    double x_lo() const { return x.front(); }
    double x_hi() const { return x.back(); }

    double u_at(std::size_t level, std::size_t i) const { return u[level * x.size() + i]; }
    double z_at(std::size_t level, std::size_t i) const { return z[level * x.size() + i]; }

    /// Bilinear interpolation; x is clamped to the grid.
    double value(double t, double x) const;
    double z_value(double t, double x) const;
    bool contains(double x) const { return x >= x_lo() && x <= x_hi(); }
};

/// Explicit monotone scheme for u_t + sigma^2/2 u_xx + b u_x - g(-sigma u_x) = 0.
PdeSolution solve(const ForwardModel& model, const Generator& gen, const TerminalCondition& tc,
                  const GridSpec& grid, double t0 = 0.0);

/// Z(t, x) = -u_x sigma on every stored level.
std::vector<double> z_field(const PdeSolution& sol);

/// Exact value for Quadratic(gamma) with zero drift:
/// u = -(1 / 2 gamma) log E[exp(-2 gamma Phi(x + sigma sqrt(T - t) N))].
double cole_hopf_reference(const ForwardModel& model, const Generator& gen,
                           const TerminalCondition& tc, double t, double x,
                           std::size_t nodes = 64);

std::vector<PdeSolution> solve_regularized_family(const ForwardModel& model, const Generator& gen,
                                                  const TerminalCondition& tc,
                                                  const std::vector<double>& m_list, Side side,
                                                  const GridSpec& grid, double t0 = 0.0);

/// Header t,x,u,z,cap_active; rows by increasing t then x.
void write_solution_csv(const PdeSolution& sol, std::ostream& os, std::size_t level_stride = 1,
                        std::size_t x_stride = 1);

}  // namespace sqbsde
