// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "sqbsde/forward_model.hpp"
#include "sqbsde/generators.hpp"
#include "sqbsde/hj_solver.hpp"
#include "sqbsde/terminal_data.hpp"

namespace sqbsde {

enum class ControlKind { Zero, Constant, PiecewiseConstant, Feedback };

class ControlProcess {
public:
    static ControlProcess zero();
    static ControlProcess constant(double q);
    /// values[i] applies on [breakpoints[i-1], breakpoints[i]); values.size() == breakpoints.size() + 1.
    static ControlProcess piecewise(std::vector<double> breakpoints, std::vector<double> values);
    /// q(t, x) = g'(Z(t, x)) with Z interpolated on the solution grid.
    static ControlProcess feedback(std::shared_ptr<const PdeSolution> sol, Generator gen);

    double operator()(double t, double x) const;
    ControlKind kind() const noexcept { return kind_; }
    std::string label() const;

private:
    ControlKind kind_ = ControlKind::Zero;
    double q_ = 0.0;
    std::vector<double> breaks_, values_;
    std::shared_ptr<const PdeSolution> sol_;
    std::shared_ptr<const Generator> gen_;
};

ControlProcess feedback_control(std::shared_ptr<const PdeSolution> sol, const Generator& gen);

struct DualEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double penalty_mean = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// E_Q[Phi(X_T) + int f(q) du] under the tilted dynamics dX = (b + sigma q) dt + sigma dB^Q.
DualEstimate evaluate_control(const ForwardModel& model, const Conjugate& conj,
                              const TerminalCondition& tc, const ControlProcess& ctrl, double x0,
                              double t0, std::size_t n_paths, std::size_t n_steps,
                              std::uint64_t seed);

struct DualRow {
    std::string control;
    DualEstimate estimate;
    bool lower_bound_ok;    // value >= u - 3 SE - tol
    bool attainment_ok;     // feedback only: |value - u| <= 3 SE + tol
    bool is_feedback;
};

struct DualityReport {
    double u0 = 0.0;
    double scheme_tol = 0.0;
    std::vector<DualRow> rows;
    bool zero_strictly_above = false;  // Zero-control value > u0 + 3 SE
};

DualityReport duality_gap(const ForwardModel& model, const Conjugate& conj,
                          const TerminalCondition& tc, std::shared_ptr<const PdeSolution> sol,
                          double x0, double t0, std::size_t n_paths, std::size_t n_steps,
                          std::uint64_t seed, const std::vector<double>& constants = {},
                          double scheme_tol = 1e-2);

/// Header control_kind,value,std_error,penalty_mean,pass.
void write_dual_csv(const DualityReport& r, std::ostream& os);

}  // namespace sqbsde
