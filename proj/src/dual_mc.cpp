// SPDX-License-Identifier: MIT
#include "sqbsde/dual_mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sqbsde/csv.hpp"

namespace sqbsde {

ControlProcess ControlProcess::zero() { return ControlProcess{}; }

ControlProcess ControlProcess::constant(double q) {
    if (!std::isfinite(q)) throw std::invalid_argument("control must be finite");
    ControlProcess c;
    c.kind_ = ControlKind::Constant;
    c.q_ = q;
    return c;
}

ControlProcess ControlProcess::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    if (values.size() != breakpoints.size() + 1)
        throw std::invalid_argument("piecewise control needs one more value than breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("control breakpoints must increase");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("control must be finite");
    ControlProcess c;
    c.kind_ = ControlKind::PiecewiseConstant;
    c.breaks_ = std::move(breakpoints);
    c.values_ = std::move(values);
    return c;
}

ControlProcess ControlProcess::feedback(std::shared_ptr<const PdeSolution> sol, Generator gen) {
    if (!sol) throw std::invalid_argument("feedback control needs a solution");
    ControlProcess c;
    c.kind_ = ControlKind::Feedback;
    c.sol_ = std::move(sol);
    c.gen_ = std::make_shared<const Generator>(std::move(gen));
    return c;
}

double ControlProcess::operator()(double t, double x) const {
    switch (kind_) {
        case ControlKind::Zero: return 0.0;
        case ControlKind::Constant: return q_;
        case ControlKind::PiecewiseConstant: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
            return values_[static_cast<std::size_t>(it - breaks_.begin())];
        }
        case ControlKind::Feedback: return gen_->grad(sol_->z_value(t, x)).value;
    }
    return 0.0;
}

std::string ControlProcess::label() const {
    std::ostringstream os;
    switch (kind_) {
        case ControlKind::Zero: os << "zero"; break;
        case ControlKind::Constant: os << "constant(" << format_double(q_) << ")"; break;
        case ControlKind::PiecewiseConstant: os << "piecewise(" << values_.size() << ")"; break;
        case ControlKind::Feedback: os << "feedback"; break;
    }
    return os.str();
}

ControlProcess feedback_control(std::shared_ptr<const PdeSolution> sol, const Generator& gen) {
    return ControlProcess::feedback(std::move(sol), gen);
}

DualEstimate evaluate_control(const ForwardModel& model, const Conjugate& conj,
                              const TerminalCondition& tc, const ControlProcess& ctrl, double x0,
                              double t0, std::size_t n_paths, std::size_t n_steps,
                              std::uint64_t seed) {
    if (n_paths < 2) throw std::invalid_argument("need at least two paths");
    const bool untilted = ctrl.kind() == ControlKind::Zero;
    Tilt tilt;
    if (!untilted) tilt = [&ctrl](double t, double x) { return ctrl(t, x); };
    PathSimulator sim(model, x0, t0, n_steps, seed, tilt);
    const auto& times = sim.times();
    const double dt = sim.dt();
    std::vector<double> x(n_steps + 1);

    // Welford accumulation keeps the result independent of path count scale.
    double mean = 0.0, m2 = 0.0, pen_mean = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        sim.run(p, x.data(), nullptr, nullptr);
        double pen = 0.0;
        if (!untilted)
            for (std::size_t k = 0; k < n_steps; ++k) pen += conj(ctrl(times[k], x[k])) * dt;
        const double v = tc(x[n_steps]) + pen;
        const double n = static_cast<double>(p + 1);
        const double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
        pen_mean += (pen - pen_mean) / n;
    }
    DualEstimate e;
    e.value = mean;
    e.std_error = std::sqrt(m2 / static_cast<double>(n_paths - 1) / static_cast<double>(n_paths));
    e.penalty_mean = pen_mean;
    e.n_paths = n_paths;
    e.seed = seed;
    return e;
}

DualityReport duality_gap(const ForwardModel& model, const Conjugate& conj,
                          const TerminalCondition& tc, std::shared_ptr<const PdeSolution> sol,
                          double x0, double t0, std::size_t n_paths, std::size_t n_steps,
                          std::uint64_t seed, const std::vector<double>& constants,
                          double scheme_tol) {
    if (!sol) throw std::invalid_argument("duality gap needs a solution");
    if (!sol->contains(x0) || t0 < sol->t0() || t0 > sol->T())
        throw std::invalid_argument("solution grid does not cover (t0, x0)");
    DualityReport r;
    r.u0 = sol->value(t0, x0);
    r.scheme_tol = scheme_tol;
    auto add = [&](const ControlProcess& c, bool feedback) {
        DualRow row;
        row.control = c.label();
        row.estimate = evaluate_control(model, conj, tc, c, x0, t0, n_paths, n_steps, seed);
        const double se = row.estimate.std_error;
        row.lower_bound_ok = row.estimate.value >= r.u0 - 3.0 * se - scheme_tol;
        row.is_feedback = feedback;
        row.attainment_ok = !feedback || std::abs(row.estimate.value - r.u0) <= 3.0 * se + scheme_tol;
        r.rows.push_back(row);
    };
    add(ControlProcess::zero(), false);
    r.zero_strictly_above =
        r.rows.front().estimate.value > r.u0 + 3.0 * r.rows.front().estimate.std_error;
    for (double q : constants) add(ControlProcess::constant(q), false);
    add(feedback_control(sol, conj.source()), true);
    return r;
}

void write_dual_csv(const DualityReport& r, std::ostream& os) {
    CsvWriter w(os);
    w.header({"control_kind", "value", "std_error", "penalty_mean", "pass"});
    w.cell("pde_value").cell(r.u0).cell(0.0).cell(0.0).cell("pass").end_row();
    for (const auto& row : r.rows) {
        w.cell(row.control).cell(row.estimate.value).cell(row.estimate.std_error);
        w.cell(row.estimate.penalty_mean);
        w.cell(row.lower_bound_ok && row.attainment_ok ? "pass" : "fail");
        w.end_row();
    }
}

}  // namespace sqbsde
