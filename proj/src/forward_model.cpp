// SPDX-License-Identifier: MIT
#include "sqbsde/forward_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sqbsde/csv.hpp"
#include "sqbsde/errors.hpp"
#include "sqbsde/rng.hpp"

namespace sqbsde {

Drift Drift::zero() { return Drift{}; }

Drift Drift::linear(double beta) {
    Drift d;
    d.kind_ = beta == 0.0 ? DriftKind::Zero : DriftKind::Linear;
    d.a_ = beta;
    d.bx_bound_ = std::abs(beta);
    d.b_bound_ = beta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return d;
}

Drift Drift::tanh(double a) {
    Drift d;
    d.kind_ = a == 0.0 ? DriftKind::Zero : DriftKind::Tanh;
    d.a_ = a;
    d.bx_bound_ = std::abs(a);
    d.b_bound_ = std::abs(a);
    return d;
}

Drift Drift::sine(double a) {
    Drift d;
    d.kind_ = a == 0.0 ? DriftKind::Zero : DriftKind::Sine;
    d.a_ = a;
    d.bx_bound_ = std::abs(a);
    d.b_bound_ = std::abs(a);
    return d;
}

Drift Drift::custom(Fn b, Fn b_x, double b_x_bound, double b_bound, std::string name) {
    if (!b || !b_x) throw std::invalid_argument("custom drift needs b and b_x");
    Drift d;
    d.kind_ = DriftKind::Custom;
    d.b_ = std::move(b);
    d.bx_ = std::move(b_x);
    d.bx_bound_ = b_x_bound;
    d.b_bound_ = b_bound;
    d.name_ = std::move(name);
    return d;
}

double Drift::operator()(double t, double x) const {
    switch (kind_) {
        case DriftKind::Zero: return 0.0;
        case DriftKind::Linear: return a_ * x;
        case DriftKind::Tanh: return a_ * std::tanh(x);
        case DriftKind::Sine: return a_ * std::sin(x);
        case DriftKind::Custom: return b_(t, x);
    }
    return 0.0;
}

double Drift::dx(double t, double x) const {
    switch (kind_) {
        case DriftKind::Zero: return 0.0;
        case DriftKind::Linear: return a_;
        case DriftKind::Tanh: {
            double c = std::cosh(x);
            return a_ / (c * c);
        }
        case DriftKind::Sine: return a_ * std::cos(x);
        case DriftKind::Custom: return bx_(t, x);
    }
    return 0.0;
}

std::string Drift::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case DriftKind::Zero: os << "zero"; break;
        case DriftKind::Linear: os << "linear:beta=" << a_; break;
        case DriftKind::Tanh: os << "tanh:a=" << a_; break;
        case DriftKind::Sine: os << "sine:a=" << a_; break;
        case DriftKind::Custom: os << name_; break;
    }
    return os.str();
}

ForwardModel::ForwardModel(Drift drift, double sigma, double horizon, std::optional<double> lambda)
    : drift_(std::move(drift)), sigma_(sigma), T_(horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive");
    if (!std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite");
    lambda_ = lambda ? *lambda : drift_.b_x_bound();
    if (!(lambda_ >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
}

PathSimulator::PathSimulator(const ForwardModel& model, double x0, double t0, std::size_t n_steps,
                             std::uint64_t seed, Tilt tilt)
    : model_(model), x0_(x0), t0_(t0), n_steps_(n_steps), seed_(seed), tilt_(std::move(tilt)) {
    if (n_steps < 1) throw std::invalid_argument("need at least one time step");
    if (!(t0 < model.horizon())) throw std::invalid_argument("t0 must be before the horizon");
    dt_ = (model.horizon() - t0) / static_cast<double>(n_steps);
    times_.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) times_[k] = t0 + dt_ * static_cast<double>(k);
    times_.back() = model.horizon();
}

void PathSimulator::run(std::size_t path, double* x, double* flow, double* noise) const {
    Stream rng(seed_, path);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sq = std::sqrt(dt_);
    const double sigma = model_.sigma();
    const Drift& b = model_.drift();
    double xv = x0_, fv = 1.0;
    x[0] = xv;
    if (flow) flow[0] = fv;
    for (std::size_t k = 0; k < n_steps_; ++k) {
        const double t = times_[k];
        const double dB = sq * normal(rng);
        double mu = b(t, xv);
        if (tilt_) mu += sigma * tilt_(t, xv);
        const double bx = b.dx(t, xv);
        xv += mu * dt_ + sigma * dB;
        fv *= std::exp(bx * dt_);
        if (!std::isfinite(xv) || !std::isfinite(fv))
            throw SimulationDivergedError(
                "state became non-finite at step " + std::to_string(k + 1), k + 1);
        x[k + 1] = xv;
        if (flow) flow[k + 1] = fv;
        if (noise) noise[k] = dB;
    }
}

PathBundle simulate_paths(const ForwardModel& model, double x0, double t0, std::size_t n_paths,
                          std::size_t n_steps, std::uint64_t seed, const Tilt& tilt) {
    PathSimulator sim(model, x0, t0, n_steps, seed, tilt);
    PathBundle pb;
    pb.times = sim.times();
    pb.n_paths = n_paths;
    pb.n_steps = n_steps;
    pb.seed = seed;
    pb.stream_count = n_paths;
    pb.x.resize(n_paths * (n_steps + 1));
    pb.flow.resize(n_paths * (n_steps + 1));
    pb.noise.resize(n_paths * n_steps);
    for (std::size_t p = 0; p < n_paths; ++p)
        sim.run(p, &pb.x[p * (n_steps + 1)], &pb.flow[p * (n_steps + 1)], &pb.noise[p * n_steps]);
    return pb;
}

CompatReport check_compat_417(const ForwardModel& model, std::size_t probe_count) {
    if (probe_count < 1) throw std::invalid_argument("need at least one probe");
    CompatReport r{0.0, model.lambda(), true, 0.0, 0.0, 0};
    if (model.sigma() == 0.0) {
        r.probes = 0;
        return r;  // both sides of the inequality vanish
    }
    const std::size_t nt = probe_count > 1 ? std::min<std::size_t>(probe_count, 5) : 1;
    const std::size_t nx = std::max<std::size_t>(1, probe_count / nt) | 1;  // odd, includes 0
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = nt == 1 ? 0.0 : model.horizon() * static_cast<double>(i) / (nt - 1);
        for (std::size_t j = 0; j < nx; ++j) {
            const double x =
                nx == 1 ? 0.0 : -10.0 + 20.0 * static_cast<double>(j) / static_cast<double>(nx - 1);
            const double v = std::abs(model.drift().dx(t, x));
            ++r.probes;
            if (v > r.measured) {
                r.measured = v;
                r.worst_t = t;
                r.worst_x = x;
            }
        }
    }
    r.pass = r.measured <= model.lambda();
    return r;
}

std::pair<double, double> gaussian_terminal_law(const ForwardModel& model, double x0, double t0) {
    if (!model.drift().is_zero())
        throw NotGaussianError("terminal law is Gaussian only for zero drift (drift " +
                               model.drift().describe() + ")");
    if (!(t0 <= model.horizon())) throw std::invalid_argument("t0 beyond horizon");
    return {x0, model.sigma() * model.sigma() * (model.horizon() - t0)};
}

void write_paths_csv(const PathBundle& b, std::ostream& os) {
    CsvWriter w(os);
    w.header({"path", "step", "t", "x", "flow", "dB"});
    for (std::size_t p = 0; p < b.n_paths; ++p)
        for (std::size_t k = 0; k <= b.n_steps; ++k) {
            w.cell(p).cell(k).cell(b.times[k]).cell(b.x_at(p, k)).cell(b.flow_at(p, k));
            if (k < b.n_steps)
                w.cell(b.dB(p, k));
            else
                w.cell(std::string_view{});
            w.end_row();
        }
}

}  // namespace sqbsde
