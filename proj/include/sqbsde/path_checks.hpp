// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <utility>

#include "sqbsde/forward_model.hpp"
#include "sqbsde/generators.hpp"
#include "sqbsde/hj_solver.hpp"
#include "sqbsde/terminal_data.hpp"

namespace sqbsde {

struct ResidualReport {
    double rms_terminal_residual = 0.0;
    double max_step_residual = 0.0;
    double energy = 0.0;       // mean of sum Z^2 dt
    double energy_se = 0.0;
    double dt = 0.0;
    double dx = 0.0;
    double excluded_fraction = 0.0;
    std::size_t paths_used = 0;
};

/// Pathwise BSDE check along an untilted bundle. Y starts at u(t0, x0) and is
/// integrated forward with Z read from the z-field; the terminal residual is
/// Y_T - Phi(X_T). Step residuals use Y = u(s, X_s) directly.
ResidualReport bsde_residual(const PdeSolution& sol, const ForwardModel& model,
                             const Generator& gen, const TerminalCondition& tc,
                             const PathBundle& bundle);

struct CheckResult {
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// energy <= 4 sup^2 + 3 SE.
CheckResult bmo_energy_check(const ResidualReport& r, double sup_norm);

struct EnvelopeReport {
    double worst_ratio = 0.0;  // max over checked levels of lhs / bound
    double worst_t = 0.0;
    double worst_lhs = 0.0;
    double worst_bound = 0.0;
    std::size_t levels_checked = 0;
    bool pass = true;
    bool skipped = false;
    std::string reason;
};

/// max_x |Z(s, x)| <= 2 e^{lambda T} sup (T - s)^{-1/2} for T - s >= 10 dt.
EnvelopeReport apriori_z_bound(const PdeSolution& sol, const ForwardModel& model, double sup_norm,
                               double safety_margin = 1.0);

/// max_x f(g'(Z(s, x))) <= 2 sup (T - s)^{-1} for T - s >= 10 dt.
EnvelopeReport penalty_bound_check(const PdeSolution& sol, const Conjugate& conj, double sup_norm);

/// True when r -> r h'(r) - h(r) is convex, the precondition of the penalty bound.
bool penalty_composite_convex(const Generator& gen, double r_max);

struct ExponentFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;  // -1/q
    std::size_t points = 0;
    double tau_lo = 0.0, tau_hi = 0.0;
    bool pass = false;
};

/// Least-squares slope of log max_x |Z| against log(T - s) on [10 dt, (T - t0) / 10].
ExponentFit exponent_fit(const PdeSolution& sol, double q, double tolerance = 0.15);

/// Largest |-u_x(s, X_s) (grad X_s)^{-1} sigma grad X_s - Z(s, X_s)| over a bundle.
double flow_identity_residual(const PdeSolution& sol, const PathBundle& bundle);

}  // namespace sqbsde
