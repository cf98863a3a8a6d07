// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sqbsde {

enum class GeneratorKind { Power, Quadratic, Sampled };

struct Gradient {
    double value;
    bool smooth;  // false at a node of a sampled profile
};

/// Convex radial generator g(z) = h(|z|) with h(0) = 0.
class Generator {
public:
    static Generator power(double q, int dim = 1);
    static Generator quadratic(double gamma, int dim = 1);
    /// Nodes (r, h(r)) of a piecewise-linear convex profile; first node must be (0, 0).
    static Generator sampled(std::vector<std::pair<double, double>> nodes, int dim = 1);

    /// z -> rho_N(|z|) g(z), rho_N the cubic smoothstep from 1 at N down to 0 at N+1.
    Generator truncated(double N) const;

    GeneratorKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return dim_; }
    double exponent() const noexcept { return q_; }
    double gamma() const noexcept { return gamma_; }
    const std::vector<std::pair<double, double>>& nodes() const noexcept { return nodes_; }
    std::optional<double> truncation() const noexcept { return trunc_; }

    /// Radial profile h(r), r >= 0.
    double h(double r) const;
    Gradient hprime(double r) const;

    double operator()(double z) const { return h(z < 0 ? -z : z); }
    double eval(std::span<const double> z) const;

    Gradient grad(double z) const;
    std::vector<double> grad(std::span<const double> z, bool* smooth = nullptr) const;

    /// sup of |h'| over [0, r].
    double max_slope(double r) const;

    std::string describe() const;

private:
    double base_h(double r) const;
    Gradient base_hprime(double r) const;

    GeneratorKind kind_ = GeneratorKind::Power;
    int dim_ = 1;
    double q_ = 0.0;
    double gamma_ = 0.0;
    std::vector<std::pair<double, double>> nodes_;
    std::vector<double> slopes_;
    std::optional<double> trunc_;
};

struct ClosedForm {
    double p;  // f(x) = c |x|^p
    double c;
};

/// Fenchel-Legendre transform f(x) = sup_z (z x - g(z)).
class Conjugate {
public:
    explicit Conjugate(Generator gen);

    const Generator& source() const noexcept { return gen_; }
    std::optional<ClosedForm> closed_form() const noexcept { return closed_; }

    double operator()(double x) const;
    double eval(std::span<const double> x) const;

    /// Radial maximizer r* >= 0 of r|x| - h(r).
    double maximizer(double x) const;

private:
    Generator gen_;
    std::optional<ClosedForm> closed_;
};

/// sup_{r >= 0} (r y - h(r)) for a convex h with h(0) finite. The bracket
/// doubles from [0, 1] until the objective turns down and stops at `cap`.
double radial_legendre(const std::function<double(double)>& h, double y,
                       double cap = 1e150, double* argmax = nullptr);

double young_gap(const Generator& gen, const Conjugate& conj, double z, double x);
double young_gap(const Generator& gen, const Conjugate& conj,
                 std::span<const double> z, std::span<const double> x);

struct ProbePoint {
    double z;
    double ratio;  // g(z) / z^2
};

std::vector<ProbePoint> superquadratic_probe(const Generator& gen, std::size_t K);

struct GrowthReport {
    double R;
    double f_ratio_R;
    double f_ratio_10R;
    double g_ratio_R;
    double g_ratio_10R;
    bool superquadratic_trend;  // f-ratio falling and g-ratio rising
    double M;
    double alpha;  // min_{|x| = M} f(x)
};

GrowthReport check_growth_duality(const Generator& gen, const Conjugate& conj,
                                  double R, double M = 1.0);

/// Two-column CSV (z, g) with one header line.
Generator load_sampled_generator(const std::string& path, int dim = 1);

/// f(g'(z)) = z g'(z) - g(z) along the radial profile.
double penalty_of_gradient(const Generator& gen, double z);

}  // namespace sqbsde
