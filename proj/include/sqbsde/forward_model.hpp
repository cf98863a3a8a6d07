// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace sqbsde {

enum class DriftKind { Zero, Linear, Tanh, Sine, Custom };

/// Time-homogeneous or time-dependent scalar drift b(t, x) with b_x.
class Drift {
public:
    using Fn = std::function<double(double, double)>;

    static Drift zero();
    static Drift linear(double beta);          // beta x
    static Drift tanh(double a);               // a tanh(x)
    static Drift sine(double a);               // a sin(x)
    static Drift custom(Fn b, Fn b_x, double b_x_bound, double b_bound, std::string name = "custom");

    double operator()(double t, double x) const;
    double dx(double t, double x) const;
    DriftKind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return a_; }
    double b_x_bound() const noexcept { return bx_bound_; }
    /// sup |b| on the real line, or +inf for linear drift.
    double b_bound() const noexcept { return b_bound_; }
    bool is_zero() const noexcept { return kind_ == DriftKind::Zero; }
    std::string describe() const;

private:
    DriftKind kind_ = DriftKind::Zero;
    double a_ = 0.0;
    double bx_bound_ = 0.0;
    double b_bound_ = 0.0;
    Fn b_, bx_;
    std::string name_;
};

class ForwardModel {
public:
    /// lambda defaults to the drift's b_x bound, the smallest admissible value.
    ForwardModel(Drift drift, double sigma, double horizon,
                 std::optional<double> lambda = std::nullopt);

    const Drift& drift() const noexcept { return drift_; }
    double sigma() const noexcept { return sigma_; }
    double horizon() const noexcept { return T_; }
    double lambda() const noexcept { return lambda_; }
    double b_x_bound() const noexcept { return drift_.b_x_bound(); }

private:
    Drift drift_;
    double sigma_;
    double T_;
    double lambda_;
};

using Tilt = std::function<double(double t, double x)>;

struct PathBundle {
    std::vector<double> times;  // n_steps + 1 entries
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    std::vector<double> x;      // n_paths * (n_steps + 1), row per path
    std::vector<double> flow;   // same layout
    std::vector<double> noise;  // n_paths * n_steps
    std::uint64_t seed = 0;
    std::size_t stream_count = 0;

    double x_at(std::size_t p, std::size_t k) const { return x[p * (n_steps + 1) + k]; }
    double flow_at(std::size_t p, std::size_t k) const { return flow[p * (n_steps + 1) + k]; }
    double dB(std::size_t p, std::size_t k) const { return noise[p * n_steps + k]; }
    double dt() const { return times[1] - times[0]; }
};

/// Simulates one path at a time into caller-owned buffers. Path p always
/// draws from stream (seed, p).
class PathSimulator {
public:
    PathSimulator(const ForwardModel& model, double x0, double t0, std::size_t n_steps,
                  std::uint64_t seed, Tilt tilt = {});

    void run(std::size_t path, double* x, double* flow, double* noise) const;
    const std::vector<double>& times() const noexcept { return times_; }
    double dt() const noexcept { return dt_; }

private:
    const ForwardModel& model_;
    double x0_, t0_;
    std::size_t n_steps_;
    std::uint64_t seed_;
    Tilt tilt_;
    double dt_;
    std::vector<double> times_;
};

PathBundle simulate_paths(const ForwardModel& model, double x0, double t0, std::size_t n_paths,
                          std::size_t n_steps, std::uint64_t seed, const Tilt& tilt = {});

struct CompatReport {
    double measured;  // sup |b_x| over the probes
    double lambda;
    bool pass;
    double worst_t;
    double worst_x;
    std::size_t probes;
};

CompatReport check_compat_417(const ForwardModel& model, std::size_t probe_count);

std::pair<double, double> gaussian_terminal_law(const ForwardModel& model, double x0, double t0);

/// One row per (path, step): path,step,t,x,flow,dB.
void write_paths_csv(const PathBundle& bundle, std::ostream& os);

}  // namespace sqbsde
